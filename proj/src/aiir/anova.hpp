#pragma once

// Two-way analysis of variance of an AI volume response against AI system
// category (factor A) and market region (factor B), with Type II sums of
// squares: each main effect is charged the SSE drop from adding it to the
// model containing the other terms that do not include it.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "aiir/incident.hpp"

namespace aiir {

enum class AnovaResponse { AiBuyVolumePct, AiSellVolumePct };

AnovaResponse parse_anova_response(std::string_view token);
std::string_view to_token(AnovaResponse response);

struct AnovaSpec {
  AnovaResponse response = AnovaResponse::AiBuyVolumePct;
  bool include_interaction = false;
};

struct AnovaTerm {
  std::string name; // "ai_system_category", "market_region", "interaction"
  double ss = 0.0;
  std::size_t df = 0;
  double f_stat = 0.0;
  double p_value = 1.0;
  double partial_eta_sq = 0.0;
};

struct AnovaResult {
  std::vector<AnovaTerm> terms;
  double ss_residual = 0.0;
  std::size_t df_residual = 0;
  double ss_total = 0.0;
  double model_r_squared = 0.0;
  std::size_t n = 0;
  bool degenerate = false; // residual SS vanished; see two_way_anova notes
  std::vector<std::string> levels_a; // observed, sorted
  std::vector<std::string> levels_b;
  std::vector<std::string> empty_cells; // "A_LEVEL x B_LEVEL" with no rows
};

// Raised for designs the model cannot fit: a factor with fewer than two
// observed levels, too few rows for the parameter count, or a rank-deficient
// design matrix. Carries the empty-cell list as fitting diagnostics.
class DegenerateDesignError : public std::runtime_error {
public:
  DegenerateDesignError(const std::string& message, std::vector<std::string> empty_cells)
      : std::runtime_error(message), empty_cells_(std::move(empty_cells)) {}
  const std::vector<std::string>& empty_cells() const { return empty_cells_; }

private:
  std::vector<std::string> empty_cells_;
};

// Effect size ss_term / (ss_term + ss_residual). Both inputs must be >= 0
// and not both zero (domain error).
double partial_eta_squared(double ss_term, double ss_residual);

// Fits the dummy-coded least-squares models and assembles the term table.
// Degenerate residuals: ss_res == 0 with a nonzero term SS reports F as
// +infinity with p = 0 and eta^2 = 1 (flagged); a term with both SSs zero
// reports F = 0, p = 1, eta^2 = 0. ss_total == 0 yields R^2 = 0.
AnovaResult two_way_anova(const std::vector<IncidentRecord>& records, const AnovaSpec& spec);

} // namespace aiir
