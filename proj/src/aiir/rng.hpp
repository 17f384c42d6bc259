#pragma once

#include <cmath>
#include <cstdint>

namespace aiir {

// Portable deterministic 64-bit PRNG: xoshiro256** seeded through splitmix64.
// The exact constants are part of the synthesizer's external contract so that
// independent implementations can reproduce byte-identical output streams:
//
//   splitmix64:  state += 0x9E3779B97F4A7C15
//                z = (z ^ z>>30) * 0xBF58476D1CE4E5B9
//                z = (z ^ z>>27) * 0x94D049BB133111EB
//                return z ^ z>>31
//   seeding:     s[0..3] = four successive splitmix64 outputs of the seed
//   xoshiro256**: result = rotl(s[1]*5, 7) * 9, then the standard state update
//   next_double: (next() >> 11) * 2^-53                  -> [0, 1)
//   next_index:  high 64 bits of next() * n (128-bit product)  -> [0, n)
//   next_normal: Acklam inverse-normal-CDF applied to
//                ((next() >> 11) + 0.5) * 2^-53          (strictly in (0,1))
class Rng {
public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      word = splitmix64(x);
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform index in [0, n); n must be nonzero.
  std::uint64_t next_index(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  // Standard normal deviate via inverse-CDF sampling (deterministic, no
  // rejection loop, so the stream position advances by exactly one draw).
  double next_normal() {
    const double u = (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    return inverse_normal_cdf(u);
  }

  static std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Acklam's rational approximation, absolute error below 6e-9 over (0, 1).
  static double inverse_normal_cdf(double p);

private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

inline double Rng::inverse_normal_cdf(double p) {
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

} // namespace aiir
