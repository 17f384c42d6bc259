#include "aiir/incident.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aiir/text.hpp"

namespace aiir {

namespace {

struct InstrumentEntry {
  InstrumentCategory value;
  std::string_view token;
};

constexpr InstrumentEntry kInstruments[] = {
    {InstrumentCategory::Equity, "EQUITY"},
    {InstrumentCategory::Bnd, "BND"},
    {InstrumentCategory::Derv, "DERV"},
    {InstrumentCategory::Fx, "FX"},
    {InstrumentCategory::Etf, "ETF"},
    {InstrumentCategory::MutualFund, "MUTUALFUND"},
    {InstrumentCategory::Cmdty, "CMDTY"},
    {InstrumentCategory::Sfp, "SFP"},
    {InstrumentCategory::Ea, "EA"},
    {InstrumentCategory::Future, "FUTURE"},
};

struct SystemEntry {
  AISystemCategory value;
  std::string_view token;
};

constexpr SystemEntry kSystems[] = {
    {AISystemCategory::AlgorithmicTrading, "ALGORITHMIC_TRADING"},
    {AISystemCategory::Arbitrage, "ARBITRAGE"},
    {AISystemCategory::Hft, "HFT"},
    {AISystemCategory::MarketMaking, "MARKET_MAKING"},
    {AISystemCategory::PredictionBasedTrading, "PREDICTION_BASED_TRADING"},
    {AISystemCategory::PortfolioOptimization, "PORTFOLIO_OPTIMIZATION"},
    {AISystemCategory::SentimentAnalysisBasedTrading, "SENTIMENT_ANALYSIS_BASED_TRADING"},
    {AISystemCategory::SmartOrderRouting, "SMART_ORDER_ROUTING"},
};

struct PatternEntry {
  IncidentPattern value;
  std::string_view token;
};

constexpr PatternEntry kPatterns[] = {
    {IncidentPattern::AnomalyDetection, "PATTERN_ANOMALY_DETECTION"},
    {IncidentPattern::Arbitrage, "PATTERN_ARBITRAGE"},
    {IncidentPattern::InformationAdvantage, "PATTERN_INFORMATION_ADVANTAGE"},
    {IncidentPattern::MomentumIgnition, "PATTERN_MOMENTUM_IGNITION"},
    {IncidentPattern::OrderBookManipulation, "PATTERN_ORDER_BOOK_MANIPULATION"},
    {IncidentPattern::SentimentDriven, "PATTERN_SENTIMENT_DRIVEN"},
    {IncidentPattern::VolatilityTrading, "PATTERN_VOLATILITY_TRADING"},
};

bool finite_nonnegative(double v) { return std::isfinite(v) && v >= 0.0; }

} // namespace

RegionDomain::RegionDomain() : tokens_{"APAC", "EMEA", "AMER"} {}

const RegionDomain& RegionDomain::builtin() {
  static const RegionDomain domain;
  return domain;
}

bool RegionDomain::contains(std::string_view token) const {
  const std::string canonical = normalize_token(token);
  return std::find(tokens_.begin(), tokens_.end(), canonical) != tokens_.end();
}

std::string RegionDomain::add(std::string_view token) {
  std::string canonical = normalize_token(token);
  if (canonical.empty()) {
    throw std::invalid_argument("market region token must not be empty");
  }
  if (!contains(canonical)) {
    tokens_.push_back(canonical);
  }
  return canonical;
}

std::string_view to_token(InstrumentCategory v) {
  return kInstruments[static_cast<int>(v)].token;
}

std::string_view to_token(AISystemCategory v) { return kSystems[static_cast<int>(v)].token; }

std::string_view to_token(IncidentPattern v) { return kPatterns[static_cast<int>(v)].token; }

const std::vector<InstrumentCategory>& all_instrument_categories() {
  static const std::vector<InstrumentCategory> all = [] {
    std::vector<InstrumentCategory> v;
    for (const auto& e : kInstruments) v.push_back(e.value);
    return v;
  }();
  return all;
}

const std::vector<AISystemCategory>& all_ai_system_categories() {
  static const std::vector<AISystemCategory> all = [] {
    std::vector<AISystemCategory> v;
    for (const auto& e : kSystems) v.push_back(e.value);
    return v;
  }();
  return all;
}

const std::vector<IncidentPattern>& all_incident_patterns() {
  static const std::vector<IncidentPattern> all = [] {
    std::vector<IncidentPattern> v;
    for (const auto& e : kPatterns) v.push_back(e.value);
    return v;
  }();
  return all;
}

InstrumentCategory parse_instrument_category(std::string_view raw) {
  const std::string token = normalize_token(raw);
  if (token == "EQTY") { // sample-sheet spelling, emitted canonically as EQUITY
    return InstrumentCategory::Equity;
  }
  if (token == "MUTUAL_FUND") { // two-word spellings normalize with a separator
    return InstrumentCategory::MutualFund;
  }
  for (const auto& e : kInstruments) {
    if (token == e.token) return e.value;
  }
  throw ParseError("Instrument_Category", std::string(raw),
                   "unknown instrument category token '" + std::string(raw) + "'");
}

AISystemCategory parse_ai_system_category(std::string_view raw) {
  const std::string token = normalize_token(raw);
  for (const auto& e : kSystems) {
    if (token == e.token) return e.value;
  }
  throw ParseError("AI_System_Category", std::string(raw),
                   "unknown AI system category token '" + std::string(raw) + "'");
}

IncidentPattern parse_incident_pattern(std::string_view raw) {
  const std::string token = normalize_token(raw);
  for (const auto& e : kPatterns) {
    if (token == e.token) return e.value;
  }
  throw ParseError("Incident_Pattern", std::string(raw),
                   "unknown incident pattern token '" + std::string(raw) + "'");
}

bool parse_yes_no(std::string_view raw, std::string_view field) {
  const std::string token = normalize_token(raw);
  if (token == "YES") return true;
  if (token == "NO") return false;
  throw ParseError(std::string(field), std::string(raw),
                   std::string(field) + " must be YES or NO, got '" + std::string(raw) + "'");
}

std::string_view yes_no(bool v) { return v ? "YES" : "NO"; }

std::string VolumeVs30d::to_text() const {
  if (is_bucket()) return bucket_label();
  return format_double(exact_value());
}

VolumeVs30d VolumeVs30d::from_text(std::string_view text) {
  const std::string_view s = trim(text);
  if (const auto v = parse_double(s)) {
    return VolumeVs30d::exact(*v);
  }
  if (bucket_interval(s)) {
    return VolumeVs30d::bucket(std::string(s));
  }
  throw ParseError("Volume_vs_30D_Avg_Pct", std::string(text),
                   "expected a percent value or bucket label, got '" + std::string(text) + "'");
}

std::optional<std::pair<double, double>> bucket_interval(std::string_view label) {
  std::string_view s = trim(label);
  if (s.empty() || s.back() != '%') {
    return std::nullopt;
  }
  s.remove_suffix(1);
  constexpr std::string_view kGeqUtf8 = "≥";
  if (s.starts_with(kGeqUtf8) || s.starts_with(">=")) {
    s.remove_prefix(s.starts_with(kGeqUtf8) ? kGeqUtf8.size() : 2);
    const auto lo = parse_double(s);
    if (!lo || !finite_nonnegative(*lo)) return std::nullopt;
    return std::make_pair(*lo, std::numeric_limits<double>::infinity());
  }
  // "L-U": split at the dash separating the two non-negative bounds.
  const auto dash = s.find('-', 1);
  if (dash == std::string_view::npos) return std::nullopt;
  const auto lo = parse_double(s.substr(0, dash));
  const auto hi = parse_double(s.substr(dash + 1));
  if (!lo || !hi || !finite_nonnegative(*lo) || !finite_nonnegative(*hi) || *lo >= *hi) {
    return std::nullopt;
  }
  return std::make_pair(*lo, *hi);
}

ValidationReport validate_record(const IncidentRecord& record, ValidationMode mode,
                                 const RegionDomain& regions) {
  ValidationReport report;
  auto flag = [&report](std::string field, std::string rule, std::string message) {
    report.violations.push_back({std::move(field), std::move(rule), std::move(message)});
  };

  struct VolumeField {
    const char* name;
    double value;
  };
  const VolumeField volumes[] = {
      {"Total_Buy_Volume_Pct", record.total_buy_volume_pct},
      {"Total_Sell_Volume_Pct", record.total_sell_volume_pct},
      {"AI_Buy_Volume_Pct", record.ai_buy_volume_pct},
      {"AI_Sell_Volume_Pct", record.ai_sell_volume_pct},
  };
  for (const auto& f : volumes) {
    if (!std::isfinite(f.value)) {
      flag(f.name, "finite", std::string(f.name) + " must be finite");
    } else if (f.value < -kPercentTolerance) {
      flag(f.name, "range", std::string(f.name) + " must be >= 0, got " + format_double(f.value));
    } else if (f.value > 100.0 + kPercentTolerance) {
      flag(f.name, "range", std::string(f.name) + " must be <= 100, got " + format_double(f.value));
    }
  }

  if (!std::isfinite(record.price_range_pct)) {
    flag("Price_Range_Pct", "finite", "Price_Range_Pct must be finite");
  } else if (record.price_range_pct < -kPercentTolerance) {
    flag("Price_Range_Pct", "range",
         "Price_Range_Pct must be >= 0, got " + format_double(record.price_range_pct));
  }

  if (record.volume_vs_30d.is_bucket()) {
    if (!bucket_interval(record.volume_vs_30d.bucket_label())) {
      flag("Volume_vs_30D_Avg_Pct", "bucket",
           "malformed bucket label '" + record.volume_vs_30d.bucket_label() + "'");
    }
  } else {
    const double v = record.volume_vs_30d.exact_value();
    if (!std::isfinite(v)) {
      flag("Volume_vs_30D_Avg_Pct", "finite", "Volume_vs_30D_Avg_Pct must be finite");
    } else if (v < -kPercentTolerance) {
      flag("Volume_vs_30D_Avg_Pct", "range",
           "Volume_vs_30D_Avg_Pct must be >= 0, got " + format_double(v));
    }
  }

  if (!regions.contains(record.market_region)) {
    flag("Market_Region", "enum",
         "unknown market region '" + record.market_region + "'");
  }

  if (mode == ValidationMode::Strict) {
    if (record.ai_buy_volume_pct > record.total_buy_volume_pct + kPercentTolerance) {
      flag("AI_Buy_Volume_Pct", "ordering",
           "AI_Buy_Volume_Pct " + format_double(record.ai_buy_volume_pct) +
               " exceeds Total_Buy_Volume_Pct " + format_double(record.total_buy_volume_pct));
    }
    if (record.ai_sell_volume_pct > record.total_sell_volume_pct + kPercentTolerance) {
      flag("AI_Sell_Volume_Pct", "ordering",
           "AI_Sell_Volume_Pct " + format_double(record.ai_sell_volume_pct) +
               " exceeds Total_Sell_Volume_Pct " + format_double(record.total_sell_volume_pct));
    }
  }

  report.ok = report.violations.empty();
  return report;
}

namespace {

const std::string* find_field(const std::map<std::string, std::string>& normalized,
                              std::string_view key) {
  const auto it = normalized.find(std::string(key));
  return it == normalized.end() ? nullptr : &it->second;
}

const std::string& require_field(const std::map<std::string, std::string>& normalized,
                                 std::string_view key, std::string_view table_name) {
  const std::string* value = find_field(normalized, key);
  if (value == nullptr) {
    throw ParseError(std::string(table_name), "",
                     "missing required field " + std::string(table_name));
  }
  return *value;
}

double require_percent(const std::map<std::string, std::string>& normalized,
                       std::string_view key, std::string_view table_name) {
  const std::string& raw = require_field(normalized, key, table_name);
  const auto v = parse_double(raw);
  if (!v) {
    throw ParseError(std::string(table_name), raw,
                     std::string(table_name) + " is not numeric: '" + raw + "'");
  }
  return *v;
}

} // namespace

IncidentRecord parse_record(const std::map<std::string, std::string>& row,
                            const RegionDomain& regions) {
  std::map<std::string, std::string> by_key;
  for (const auto& [key, value] : row) {
    by_key[normalize_token(key)] = value;
  }

  IncidentRecord record;
  if (const std::string* serial = find_field(by_key, "S_NO")) {
    const auto v = parse_double(*serial);
    if (!v || *v < 0 || *v != std::floor(*v)) {
      throw ParseError("S.No", *serial, "S.No must be a non-negative integer, got '" + *serial + "'");
    }
    record.serial_no = static_cast<std::uint64_t>(*v);
  }

  record.instrument_category =
      parse_instrument_category(require_field(by_key, "INSTRUMENT_CATEGORY", "Instrument_Category"));

  const std::string& region_raw = require_field(by_key, "MARKET_REGION", "Market_Region");
  record.market_region = normalize_token(region_raw);
  if (!regions.contains(record.market_region)) {
    throw ParseError("Market_Region", region_raw,
                     "unknown market region '" + region_raw + "'");
  }

  record.total_buy_volume_pct =
      require_percent(by_key, "TOTAL_BUY_VOLUME_PCT", "Total_Buy_Volume_Pct");
  record.total_sell_volume_pct =
      require_percent(by_key, "TOTAL_SELL_VOLUME_PCT", "Total_Sell_Volume_Pct");
  record.ai_buy_volume_pct = require_percent(by_key, "AI_BUY_VOLUME_PCT", "AI_Buy_Volume_Pct");
  record.ai_sell_volume_pct = require_percent(by_key, "AI_SELL_VOLUME_PCT", "AI_Sell_Volume_Pct");
  record.price_range_pct = require_percent(by_key, "PRICE_RANGE_PCT", "Price_Range_Pct");
  record.volume_vs_30d =
      VolumeVs30d::from_text(require_field(by_key, "VOLUME_VS_30D_AVG_PCT", "Volume_vs_30D_Avg_Pct"));
  record.market_impact_detected = parse_yes_no(
      require_field(by_key, "MARKET_IMPACT_DETECTED", "Market_Impact_Detected"), "Market_Impact_Detected");
  record.issue_flag = parse_yes_no(require_field(by_key, "ISSUE_FLAG", "Issue_Flag"), "Issue_Flag");
  record.ai_system_category =
      parse_ai_system_category(require_field(by_key, "AI_SYSTEM_CATEGORY", "AI_System_Category"));
  record.incident_pattern =
      parse_incident_pattern(require_field(by_key, "INCIDENT_PATTERN", "Incident_Pattern"));
  record.human_oversight_involved = parse_yes_no(
      require_field(by_key, "HUMAN_OVERSIGHT_INVOLVED", "Human_oversight_involved"),
      "Human_oversight_involved");
  record.fail_safe_triggered = parse_yes_no(
      require_field(by_key, "FAIL_SAFE_TRIGGERED", "Fail_Safe_Triggered"), "Fail_Safe_Triggered");
  return record;
}

double ai_share(const IncidentRecord& record) {
  const double denom = record.total_buy_volume_pct + record.total_sell_volume_pct;
  if (denom <= 0.0) {
    throw std::domain_error("ai_share undefined: total buy+sell volume is zero");
  }
  return 100.0 * (record.ai_buy_volume_pct + record.ai_sell_volume_pct) / denom;
}

} // namespace aiir
