#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace oracles {
namespace {

// Dense least squares via normal equations. Solves (X'X) beta = X'y with
// Gauss-Jordan elimination and partial pivoting, then returns
// ||y - X beta||^2 accumulated in long double. The squared condition
// number of X'X is harmless here because SSE is flat to first order
// around the minimizer.
double normal_equation_sse(const std::vector<std::vector<double>>& x,
                           const std::vector<double>& y) {
  const std::size_t n = x.size();
  const std::size_t p = x.empty() ? 0 : x.front().size();
  std::vector<std::vector<long double>> ata(p, std::vector<long double>(p + 1, 0.0L));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      for (std::size_t k = 0; k < p; ++k) {
        ata[j][k] += static_cast<long double>(x[i][j]) * x[i][k];
      }
      ata[j][p] += static_cast<long double>(x[i][j]) * y[i];
    }
  }

  long double scale = 0.0L;
  for (std::size_t j = 0; j < p; ++j) scale = std::max(scale, std::abs(ata[j][j]));
  for (std::size_t col = 0; col < p; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < p; ++row) {
      if (std::abs(ata[row][col]) > std::abs(ata[pivot][col])) pivot = row;
    }
    if (std::abs(ata[pivot][col]) <= 1e-10L * std::max(scale, 1.0L)) {
      throw std::runtime_error("oracle: singular normal equations");
    }
    std::swap(ata[col], ata[pivot]);
    const long double diag = ata[col][col];
    for (std::size_t k = col; k <= p; ++k) ata[col][k] /= diag;
    for (std::size_t row = 0; row < p; ++row) {
      if (row == col) continue;
      const long double factor = ata[row][col];
      if (factor == 0.0L) continue;
      for (std::size_t k = col; k <= p; ++k) ata[row][k] -= factor * ata[col][k];
    }
  }

  long double sse = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    long double fitted = 0.0L;
    for (std::size_t j = 0; j < p; ++j) fitted += ata[j][p] * x[i][j];
    const long double r = static_cast<long double>(y[i]) - fitted;
    sse += r * r;
  }
  return static_cast<double>(sse);
}

// Column selector for the four candidate models. Dummy-codes the sorted
// non-first levels of each requested factor, plus products for the
// interaction.
std::vector<std::vector<double>> build_design(const std::vector<Observation>& data,
                                              bool with_a, bool with_b, bool with_ab) {
  std::map<std::string, std::size_t> a_index, b_index;
  for (const auto& obs : data) {
    a_index.emplace(obs.a, 0);
    b_index.emplace(obs.b, 0);
  }
  std::size_t next = 0;
  for (auto& [level, idx] : a_index) idx = next++;
  next = 0;
  for (auto& [level, idx] : b_index) idx = next++;

  const std::size_t a_levels = a_index.size();
  const std::size_t b_levels = b_index.size();
  std::vector<std::vector<double>> x;
  x.reserve(data.size());
  for (const auto& obs : data) {
    std::vector<double> row;
    row.push_back(1.0);
    const std::size_t ai = a_index.at(obs.a);
    const std::size_t bi = b_index.at(obs.b);
    if (with_a) {
      for (std::size_t level = 1; level < a_levels; ++level) {
        row.push_back(ai == level ? 1.0 : 0.0);
      }
    }
    if (with_b) {
      for (std::size_t level = 1; level < b_levels; ++level) {
        row.push_back(bi == level ? 1.0 : 0.0);
      }
    }
    if (with_ab) {
      for (std::size_t la = 1; la < a_levels; ++la) {
        for (std::size_t lb = 1; lb < b_levels; ++lb) {
          row.push_back((ai == la && bi == lb) ? 1.0 : 0.0);
        }
      }
    }
    x.push_back(std::move(row));
  }
  return x;
}

std::size_t level_count(const std::vector<Observation>& data, bool factor_a) {
  std::map<std::string, std::size_t> seen;
  for (const auto& obs : data) seen.emplace(factor_a ? obs.a : obs.b, 0);
  return seen.size();
}

} // namespace

double integrated_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  // Integrate the smaller side so the partial integral never dwarfs the
  // complement.
  if (x > 0.5) return 1.0 - integrated_beta(b, a, 1.0 - x);

  const double phi = std::asin(std::sqrt(x));
  const std::size_t intervals = 50'000; // even; Simpson
  const double h = phi / static_cast<double>(intervals);
  const double pa = 2.0 * a - 1.0;
  const double pb = 2.0 * b - 1.0;
  auto density = [pa, pb](double theta) {
    return 2.0 * std::pow(std::sin(theta), pa) * std::pow(std::cos(theta), pb);
  };
  long double sum = density(0.0) + density(phi);
  for (std::size_t i = 1; i < intervals; ++i) {
    sum += (i % 2 == 1 ? 4.0L : 2.0L) * density(h * static_cast<double>(i));
  }
  const long double integral = sum * h / 3.0L;
  const double log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  return static_cast<double>(integral * std::exp(-static_cast<long double>(log_beta)));
}

double integrated_f_tail(double df1, double df2, double f) {
  if (!(f >= 0.0)) throw std::invalid_argument("oracle: f must be >= 0");
  if (std::isinf(f)) return 0.0;
  return integrated_beta(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * f));
}

AnovaStats brute_force_anova(const std::vector<Observation>& data, bool interaction) {
  const std::size_t n = data.size();
  std::vector<double> y;
  y.reserve(n);
  for (const auto& obs : data) y.push_back(obs.y);

  const double sse_main = normal_equation_sse(build_design(data, true, true, false), y);
  const double sse_no_a = normal_equation_sse(build_design(data, false, true, false), y);
  const double sse_no_b = normal_equation_sse(build_design(data, true, false, false), y);
  const double sse_full =
      interaction ? normal_equation_sse(build_design(data, true, true, true), y) : sse_main;

  const std::size_t a_levels = level_count(data, true);
  const std::size_t b_levels = level_count(data, false);

  AnovaStats stats;
  stats.a.ss = std::max(0.0, sse_no_a - sse_main);
  stats.b.ss = std::max(0.0, sse_no_b - sse_main);
  stats.a.df = a_levels - 1;
  stats.b.df = b_levels - 1;
  stats.ss_residual = std::max(0.0, sse_full);

  std::size_t model_df = 1 + (a_levels - 1) + (b_levels - 1);
  if (interaction) {
    stats.ab.ss = std::max(0.0, sse_main - sse_full);
    stats.ab.df = (a_levels - 1) * (b_levels - 1);
    model_df += stats.ab.df;
  }
  stats.df_residual = n - model_df;

  long double mean = 0.0L;
  for (double value : y) mean += value;
  mean /= static_cast<long double>(n);
  long double total = 0.0L;
  for (double value : y) {
    const long double d = value - mean;
    total += d * d;
  }
  stats.ss_total = static_cast<double>(total);
  stats.r_squared =
      stats.ss_total > 0.0 ? std::clamp(1.0 - stats.ss_residual / stats.ss_total, 0.0, 1.0) : 0.0;

  const double ms_residual = stats.ss_residual / static_cast<double>(stats.df_residual);
  auto finish = [&](TermStats& term) {
    if (term.df == 0) return;
    const double ms = term.ss / static_cast<double>(term.df);
    term.f = ms / ms_residual;
    term.p = integrated_f_tail(static_cast<double>(term.df),
                               static_cast<double>(stats.df_residual), term.f);
    term.eta = term.ss / (term.ss + stats.ss_residual);
  };
  finish(stats.a);
  finish(stats.b);
  if (interaction) finish(stats.ab);
  return stats;
}

} // namespace oracles
