#include "aiir/anova.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "aiir/linalg.hpp"
#include "aiir/special.hpp"
#include "aiir/text.hpp"

namespace aiir {

AnovaResponse parse_anova_response(std::string_view token) {
  const std::string normalized = normalize_token(token);
  if (normalized == "AI_BUY_VOLUME_PCT") return AnovaResponse::AiBuyVolumePct;
  if (normalized == "AI_SELL_VOLUME_PCT") return AnovaResponse::AiSellVolumePct;
  throw ParseError("response", std::string(token),
                   "response must be ai_buy_volume_pct or ai_sell_volume_pct");
}

std::string_view to_token(AnovaResponse response) {
  return response == AnovaResponse::AiBuyVolumePct ? "ai_buy_volume_pct" : "ai_sell_volume_pct";
}

double partial_eta_squared(double ss_term, double ss_residual) {
  if (!(ss_term >= 0.0) || !(ss_residual >= 0.0)) {
    throw std::domain_error("partial_eta_squared requires non-negative sums of squares");
  }
  if (ss_term == 0.0 && ss_residual == 0.0) {
    throw std::domain_error("partial_eta_squared undefined when both sums of squares are zero");
  }
  return ss_term / (ss_term + ss_residual);
}

namespace {

struct Design {
  std::vector<double> response;
  std::vector<std::size_t> level_a; // index into levels_a per row
  std::vector<std::size_t> level_b;
  std::vector<std::string> levels_a; // sorted observed tokens
  std::vector<std::string> levels_b;
};

Design build_design(const std::vector<IncidentRecord>& records, AnovaResponse response) {
  Design d;
  std::map<std::string, std::size_t> index_a;
  std::map<std::string, std::size_t> index_b;
  for (const auto& r : records) {
    index_a.emplace(std::string(to_token(r.ai_system_category)), 0);
    index_b.emplace(r.market_region, 0);
  }
  for (auto& [token, idx] : index_a) {
    idx = d.levels_a.size();
    d.levels_a.push_back(token);
  }
  for (auto& [token, idx] : index_b) {
    idx = d.levels_b.size();
    d.levels_b.push_back(token);
  }
  d.response.reserve(records.size());
  d.level_a.reserve(records.size());
  d.level_b.reserve(records.size());
  for (const auto& r : records) {
    d.response.push_back(response == AnovaResponse::AiBuyVolumePct ? r.ai_buy_volume_pct
                                                                   : r.ai_sell_volume_pct);
    d.level_a.push_back(index_a[std::string(to_token(r.ai_system_category))]);
    d.level_b.push_back(index_b[r.market_region]);
  }
  return d;
}

// Dummy-coded design matrix: intercept, then indicator columns for levels
// 2..A of factor A (when included), levels 2..B of factor B, and their
// products for the interaction.
Matrix model_matrix(const Design& d, bool with_a, bool with_b, bool with_ab) {
  const std::size_t n = d.response.size();
  const std::size_t a = d.levels_a.size();
  const std::size_t b = d.levels_b.size();
  std::size_t cols = 1;
  if (with_a) cols += a - 1;
  if (with_b) cols += b - 1;
  if (with_ab) cols += (a - 1) * (b - 1);

  Matrix X(n, cols);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t col = 0;
    X.at(i, col++) = 1.0;
    if (with_a) {
      for (std::size_t level = 1; level < a; ++level) {
        X.at(i, col++) = d.level_a[i] == level ? 1.0 : 0.0;
      }
    }
    if (with_b) {
      for (std::size_t level = 1; level < b; ++level) {
        X.at(i, col++) = d.level_b[i] == level ? 1.0 : 0.0;
      }
    }
    if (with_ab) {
      for (std::size_t la = 1; la < a; ++la) {
        for (std::size_t lb = 1; lb < b; ++lb) {
          X.at(i, col++) = (d.level_a[i] == la && d.level_b[i] == lb) ? 1.0 : 0.0;
        }
      }
    }
  }
  return X;
}

std::vector<std::string> find_empty_cells(const Design& d) {
  const std::size_t a = d.levels_a.size();
  const std::size_t b = d.levels_b.size();
  std::vector<std::size_t> counts(a * b, 0);
  for (std::size_t i = 0; i < d.response.size(); ++i) {
    ++counts[d.level_a[i] * b + d.level_b[i]];
  }
  std::vector<std::string> empty;
  for (std::size_t ia = 0; ia < a; ++ia) {
    for (std::size_t ib = 0; ib < b; ++ib) {
      if (counts[ia * b + ib] == 0) {
        empty.push_back(d.levels_a[ia] + " x " + d.levels_b[ib]);
      }
    }
  }
  return empty;
}

double fit_or_throw(const Design& d, bool with_a, bool with_b, bool with_ab,
                    const std::vector<std::string>& empty_cells) {
  const LeastSquaresFit fit = least_squares_sse(model_matrix(d, with_a, with_b, with_ab), d.response);
  if (fit.rank_deficient) {
    throw DegenerateDesignError("rank-deficient design matrix (confounded factor levels)",
                                empty_cells);
  }
  // Guard against a microscopically negative SSE from cancellation.
  return std::max(fit.sse, 0.0);
}

} // namespace

AnovaResult two_way_anova(const std::vector<IncidentRecord>& records, const AnovaSpec& spec) {
  const Design d = build_design(records, spec.response);
  const std::size_t n = d.response.size();
  const std::size_t a = d.levels_a.size();
  const std::size_t b = d.levels_b.size();
  const std::vector<std::string> empty_cells = find_empty_cells(d);

  if (a < 2 || b < 2) {
    throw DegenerateDesignError("each factor needs at least two observed levels", empty_cells);
  }
  std::size_t model_df = (a - 1) + (b - 1);
  if (spec.include_interaction) model_df += (a - 1) * (b - 1);
  if (n <= model_df + 1) { // +1 for the intercept
    throw DegenerateDesignError("too few rows for the model parameter count", empty_cells);
  }

  const double sse_full =
      fit_or_throw(d, true, true, spec.include_interaction, empty_cells);
  // Type II: drop one term, keep every term not containing it. Main effects
  // are always compared within the main-effects model (the interaction
  // contains both factors, so it is excluded from their comparisons).
  const double sse_main = spec.include_interaction
                              ? fit_or_throw(d, true, true, false, empty_cells)
                              : sse_full;
  const double sse_without_a = fit_or_throw(d, false, true, false, empty_cells);
  const double sse_without_b = fit_or_throw(d, true, false, false, empty_cells);

  AnovaResult result;
  result.n = n;
  result.levels_a = d.levels_a;
  result.levels_b = d.levels_b;
  result.empty_cells = empty_cells;
  result.ss_residual = sse_full;
  result.df_residual = n - 1 - model_df;

  double mean = 0.0;
  for (double v : d.response) mean += v;
  mean /= static_cast<double>(n);
  double ss_total = 0.0;
  for (double v : d.response) ss_total += (v - mean) * (v - mean);
  result.ss_total = ss_total;

  // Zero detection must tolerate float cancellation noise; everything below
  // this is "exactly zero" for the degenerate-case rules.
  const double zero_tol = 1e-12 * std::max(ss_total, 1.0);
  const bool residual_zero = result.ss_residual <= zero_tol;
  result.degenerate = residual_zero;

  auto make_term = [&](std::string name, double ss, std::size_t df) {
    AnovaTerm term;
    term.name = std::move(name);
    term.ss = std::max(ss, 0.0);
    term.df = df;
    const bool term_zero = term.ss <= zero_tol;
    if (residual_zero && term_zero) {
      term.f_stat = 0.0;
      term.p_value = 1.0;
      term.partial_eta_sq = 0.0;
    } else if (residual_zero) {
      term.f_stat = std::numeric_limits<double>::infinity();
      term.p_value = 0.0;
      term.partial_eta_sq = 1.0;
    } else {
      term.f_stat = (term.ss / static_cast<double>(term.df)) /
                    (result.ss_residual / static_cast<double>(result.df_residual));
      term.p_value = f_p_value(term.f_stat, static_cast<int>(term.df),
                               static_cast<int>(result.df_residual));
      term.partial_eta_sq = partial_eta_squared(term.ss, result.ss_residual);
    }
    return term;
  };

  result.terms.push_back(make_term("ai_system_category", sse_without_a - sse_main, a - 1));
  result.terms.push_back(make_term("market_region", sse_without_b - sse_main, b - 1));
  if (spec.include_interaction) {
    result.terms.push_back(make_term("interaction", sse_main - sse_full, (a - 1) * (b - 1)));
  }

  result.model_r_squared =
      ss_total <= zero_tol ? 0.0 : std::clamp(1.0 - result.ss_residual / ss_total, 0.0, 1.0);
  return result;
}

} // namespace aiir
