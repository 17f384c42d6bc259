#pragma once

// Deterministic synthetic-record generator: bootstrap over a seed set with
// truncated-Gaussian jitter on numeric fields and uniform mutation of
// categoricals. One PRNG stream in a documented draw order makes equal
// (seeds, config) produce byte-identical output on any platform.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "aiir/incident.hpp"

namespace aiir {

// Additive shift applied to a record's AI percents when one of its factor
// levels (AI system category or market region token) equals the map key.
// Used to plant known effects for analytics power tests.
struct InjectionShift {
  double ai_buy = 0.0;
  double ai_sell = 0.0;
};

enum class SeedSelection { Random, RoundRobin };

struct SynthConfig {
  std::uint64_t seed = 0;
  std::size_t n = 2999;
  double jitter_sigma = 1.5;             // stddev of numeric noise, percent units
  double categorical_mutation_rate = 0.15; // per-field probability in [0,1]
  bool region_neutral = false;           // resample region independently of all else
  SeedSelection seed_selection = SeedSelection::Random;
  std::map<std::string, InjectionShift> effect_injection;
};

// Empirical basis records. Construction validates every seed strictly.
class SeedSet {
public:
  explicit SeedSet(std::vector<IncidentRecord> records);

  // The four sample rows shipped with the artifact.
  static const SeedSet& builtin();

  const std::vector<IncidentRecord>& records() const { return records_; }

private:
  std::vector<IncidentRecord> records_;
};

// Generates exactly config.n strict-valid records. Per record, the PRNG is
// consumed in this fixed order:
//   1. seed-row index (Random selection only)
//   2. one normal draw per numeric field: total_buy, total_sell, ai_buy,
//      ai_sell, price, volume_vs_30d (drawn even when the seed value is
//      bucketed, in which case the bucket is carried over unchanged)
//   3. per categorical field in record order (instrument, region unless
//      region_neutral, impact, issue, system, pattern, oversight, fail-safe):
//      one uniform draw; if below the mutation rate, one index draw for the
//      replacement level
//   4. region_neutral only: one index draw for the region
// After the draws: percents are clamped to [0,100] (price and volume ratio to
// >= 0), AI percents are capped at their firm totals, and effect-injection
// shifts are applied last with totals lifted to keep AI <= Total.
// Throws std::invalid_argument on config violating its invariants.
std::vector<IncidentRecord> synthesize(const SeedSet& seeds, const SynthConfig& config,
                                       const RegionDomain& regions = RegionDomain::builtin());

struct NumericSummary {
  double mean = 0.0;
  double stddev = 0.0; // population
  std::size_t n = 0;   // observations used (bucketed ratios are excluded)
};

struct MarginalSummary {
  // Keyed by field name; iteration order is the map's (alphabetical), fixed.
  std::map<std::string, NumericSummary> numeric;
  // Field name -> (level token, count) in enum declaration order (regions in
  // domain order, booleans YES then NO); zero counts included.
  std::map<std::string, std::vector<std::pair<std::string, std::size_t>>> frequencies;
  std::size_t bucketed_volume_rows = 0;
};

MarginalSummary marginal_summary(const std::vector<IncidentRecord>& records,
                                 const RegionDomain& regions = RegionDomain::builtin());

} // namespace aiir
