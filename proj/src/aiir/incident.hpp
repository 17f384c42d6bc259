#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace aiir {

enum class InstrumentCategory {
  Equity,
  Bnd,
  Derv,
  Fx,
  Etf,
  MutualFund,
  Cmdty,
  Sfp,
  Ea,
  Future,
};

enum class AISystemCategory {
  AlgorithmicTrading,
  Arbitrage,
  Hft,
  MarketMaking,
  PredictionBasedTrading,
  PortfolioOptimization,
  SentimentAnalysisBasedTrading,
  SmartOrderRouting,
};

enum class IncidentPattern {
  AnomalyDetection,
  Arbitrage,
  InformationAdvantage,
  MomentumIgnition,
  OrderBookManipulation,
  SentimentDriven,
  VolatilityTrading,
};

// Market regions are a closed set (APAC, EMEA, AMER) by default but the
// deployment config may register additional canonical tokens.
class RegionDomain {
public:
  RegionDomain();

  static const RegionDomain& builtin();

  bool contains(std::string_view token) const; // normalized before lookup
  // Registers a region (token is normalized); returns the canonical form.
  std::string add(std::string_view token);
  const std::vector<std::string>& tokens() const { return tokens_; }

private:
  std::vector<std::string> tokens_;
};

// Raised when a field value cannot be turned into its typed form.
class ParseError : public std::runtime_error {
public:
  ParseError(std::string field, std::string value, const std::string& message)
      : std::runtime_error(message), field_(std::move(field)), value_(std::move(value)) {}

  const std::string& field() const { return field_; }
  const std::string& value() const { return value_; }

private:
  std::string field_;
  std::string value_;
};

// Volume_vs_30D_Avg_Pct carries either the exact ratio or a confidentiality
// bucket label such as "100-200%" or "≥200%"; never both.
class VolumeVs30d {
public:
  VolumeVs30d() : value_(0.0) {}
  static VolumeVs30d exact(double pct) { return VolumeVs30d(pct); }
  static VolumeVs30d bucket(std::string label) { return VolumeVs30d(std::move(label)); }

  bool is_bucket() const { return std::holds_alternative<std::string>(value_); }
  double exact_value() const { return std::get<double>(value_); }
  const std::string& bucket_label() const { return std::get<std::string>(value_); }

  // Text form as it appears in the CSV column.
  std::string to_text() const;
  static VolumeVs30d from_text(std::string_view text);

  bool operator==(const VolumeVs30d& other) const = default;

private:
  explicit VolumeVs30d(double pct) : value_(pct) {}
  explicit VolumeVs30d(std::string label) : value_(std::move(label)) {}

  std::variant<double, std::string> value_;
};

struct IncidentRecord {
  std::uint64_t serial_no = 0; // assigned by the store, 0 until then
  InstrumentCategory instrument_category = InstrumentCategory::Equity;
  std::string market_region;
  double total_buy_volume_pct = 0.0;
  double total_sell_volume_pct = 0.0;
  double ai_buy_volume_pct = 0.0;
  double ai_sell_volume_pct = 0.0;
  double price_range_pct = 0.0;
  VolumeVs30d volume_vs_30d;
  bool market_impact_detected = false;
  bool issue_flag = false;
  AISystemCategory ai_system_category = AISystemCategory::AlgorithmicTrading;
  IncidentPattern incident_pattern = IncidentPattern::AnomalyDetection;
  bool human_oversight_involved = false;
  bool fail_safe_triggered = false;

  bool operator==(const IncidentRecord& other) const = default;
};

enum class ValidationMode { Strict, Lenient };

struct Violation {
  std::string field;
  std::string rule;
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
};

// Absolute tolerance used by every numeric comparison on percent fields.
inline constexpr double kPercentTolerance = 1e-9;

std::string_view to_token(InstrumentCategory v);
std::string_view to_token(AISystemCategory v);
std::string_view to_token(IncidentPattern v);
const std::vector<InstrumentCategory>& all_instrument_categories();
const std::vector<AISystemCategory>& all_ai_system_categories();
const std::vector<IncidentPattern>& all_incident_patterns();

// Token parsers normalize first and reject anything outside the closed set.
// "EQTY" is accepted as an alias of EQUITY.
InstrumentCategory parse_instrument_category(std::string_view raw);
AISystemCategory parse_ai_system_category(std::string_view raw);
IncidentPattern parse_incident_pattern(std::string_view raw);
bool parse_yes_no(std::string_view raw, std::string_view field);
std::string_view yes_no(bool v);

// Reports every violated schema rule; strict mode additionally requires
// AI volumes not to exceed the matching totals.
ValidationReport validate_record(const IncidentRecord& record, ValidationMode mode,
                                 const RegionDomain& regions = RegionDomain::builtin());

// Builds a typed record from a flat string map keyed by the canonical column
// names (keys are matched after normalization, so "market_region" and
// "Market_Region" are equivalent). S.No is optional; the store assigns it.
IncidentRecord parse_record(const std::map<std::string, std::string>& row,
                            const RegionDomain& regions = RegionDomain::builtin());

// Combined AI share of the incident volume:
// 100 * (ai_buy + ai_sell) / (total_buy + total_sell).
double ai_share(const IncidentRecord& record);

// Decodes a bucket label into its half-open interval: "100-200%" -> [100,200),
// "≥200%" (or ">=200%") -> [200, inf). Nullopt if the label is malformed.
std::optional<std::pair<double, double>> bucket_interval(std::string_view label);

} // namespace aiir
