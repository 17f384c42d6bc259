#include "aiir/json_io.hpp"

#include "aiir/text.hpp"

namespace aiir {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError(key, "", std::string("missing required field ") + key);
  }
  return *it;
}

double require_number(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number()) {
    throw ParseError(key, v.dump(), std::string(key) + " must be a number");
  }
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) {
    throw ParseError(key, it->dump(), std::string(key) + " must be a number");
  }
  return it->get<double>();
}

std::string require_string(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_string()) {
    throw ParseError(key, v.dump(), std::string(key) + " must be a string");
  }
  return v.get<std::string>();
}

std::string string_or(const json& j, const char* key, std::string fallback) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_string()) {
    throw ParseError(key, it->dump(), std::string(key) + " must be a string");
  }
  return it->get<std::string>();
}

bool require_bool(const json& j, const char* key) {
  const json& v = require(j, key);
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_string()) return parse_yes_no(v.get<std::string>(), key);
  throw ParseError(key, v.dump(), std::string(key) + " must be a boolean or YES/NO");
}

bool bool_or(const json& j, const char* key, bool fallback) {
  return j.contains(key) ? require_bool(j, key) : fallback;
}

} // namespace

nlohmann::json record_to_json(const IncidentRecord& r) {
  json j;
  j["serial_no"] = r.serial_no;
  j["instrument_category"] = std::string(to_token(r.instrument_category));
  j["market_region"] = r.market_region;
  j["total_buy_volume_pct"] = r.total_buy_volume_pct;
  j["total_sell_volume_pct"] = r.total_sell_volume_pct;
  j["ai_buy_volume_pct"] = r.ai_buy_volume_pct;
  j["ai_sell_volume_pct"] = r.ai_sell_volume_pct;
  j["price_range_pct"] = r.price_range_pct;
  if (r.volume_vs_30d.is_bucket()) {
    j["volume_vs_30d_avg_pct"] = r.volume_vs_30d.bucket_label();
  } else {
    j["volume_vs_30d_avg_pct"] = r.volume_vs_30d.exact_value();
  }
  j["market_impact_detected"] = r.market_impact_detected;
  j["issue_flag"] = r.issue_flag;
  j["ai_system_category"] = std::string(to_token(r.ai_system_category));
  j["incident_pattern"] = std::string(to_token(r.incident_pattern));
  j["human_oversight_involved"] = r.human_oversight_involved;
  j["fail_safe_triggered"] = r.fail_safe_triggered;
  return j;
}

IncidentRecord record_from_json(const nlohmann::json& j, const RegionDomain& regions) {
  if (!j.is_object()) {
    throw ParseError("record", j.dump(), "record must be a JSON object");
  }
  IncidentRecord r;
  if (const auto it = j.find("serial_no"); it != j.end()) {
    if (!it->is_number_unsigned()) {
      throw ParseError("serial_no", it->dump(), "serial_no must be a non-negative integer");
    }
    r.serial_no = it->get<std::uint64_t>();
  }
  r.instrument_category = parse_instrument_category(require_string(j, "instrument_category"));
  r.market_region = normalize_token(require_string(j, "market_region"));
  if (!regions.contains(r.market_region)) {
    throw ParseError("market_region", r.market_region,
                     "unknown market region '" + r.market_region + "'");
  }
  r.total_buy_volume_pct = require_number(j, "total_buy_volume_pct");
  r.total_sell_volume_pct = require_number(j, "total_sell_volume_pct");
  r.ai_buy_volume_pct = require_number(j, "ai_buy_volume_pct");
  r.ai_sell_volume_pct = require_number(j, "ai_sell_volume_pct");
  r.price_range_pct = require_number(j, "price_range_pct");
  const json& vol = require(j, "volume_vs_30d_avg_pct");
  if (vol.is_number()) {
    r.volume_vs_30d = VolumeVs30d::exact(vol.get<double>());
  } else if (vol.is_string()) {
    r.volume_vs_30d = VolumeVs30d::from_text(vol.get<std::string>());
  } else {
    throw ParseError("volume_vs_30d_avg_pct", vol.dump(),
                     "volume_vs_30d_avg_pct must be a number or a bucket label");
  }
  r.market_impact_detected = require_bool(j, "market_impact_detected");
  r.issue_flag = require_bool(j, "issue_flag");
  r.ai_system_category = parse_ai_system_category(require_string(j, "ai_system_category"));
  r.incident_pattern = parse_incident_pattern(require_string(j, "incident_pattern"));
  r.human_oversight_involved = require_bool(j, "human_oversight_involved");
  r.fail_safe_triggered = require_bool(j, "fail_safe_triggered");
  return r;
}

nlohmann::json internal_report_to_json(const InternalReport& r) {
  json j;
  j["instrument_category"] = std::string(to_token(r.instrument_category));
  j["market_region"] = r.market_region;
  j["price_range_pct"] = r.price_range_pct;
  j["market_impact_detected"] = r.market_impact_detected;
  j["issue_flag"] = r.issue_flag;
  j["ai_system_category"] = std::string(to_token(r.ai_system_category));
  j["incident_pattern"] = std::string(to_token(r.incident_pattern));
  j["human_oversight_involved"] = r.human_oversight_involved;
  j["fail_safe_triggered"] = r.fail_safe_triggered;
  j["event_start"] = r.event_start;
  j["event_end"] = r.event_end;
  j["reporting_firm_id"] = r.reporting_firm_id;
  j["narrative"] = r.narrative;
  j["absolute_buy_volume"] = r.absolute_buy_volume;
  j["absolute_sell_volume"] = r.absolute_sell_volume;
  j["absolute_ai_buy_volume"] = r.absolute_ai_buy_volume;
  j["absolute_ai_sell_volume"] = r.absolute_ai_sell_volume;
  j["market_total_buy_volume"] = r.market_total_buy_volume;
  j["market_total_sell_volume"] = r.market_total_sell_volume;
  j["trailing_30d_avg_volume"] = r.trailing_30d_avg_volume;
  return j;
}

InternalReport internal_report_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw ParseError("internal_report", j.dump(), "internal report must be a JSON object");
  }
  InternalReport r;
  r.instrument_category = parse_instrument_category(require_string(j, "instrument_category"));
  r.market_region = normalize_token(require_string(j, "market_region"));
  r.price_range_pct = require_number(j, "price_range_pct");
  r.market_impact_detected = require_bool(j, "market_impact_detected");
  r.issue_flag = require_bool(j, "issue_flag");
  r.ai_system_category = parse_ai_system_category(require_string(j, "ai_system_category"));
  r.incident_pattern = parse_incident_pattern(require_string(j, "incident_pattern"));
  r.human_oversight_involved = require_bool(j, "human_oversight_involved");
  r.fail_safe_triggered = require_bool(j, "fail_safe_triggered");
  r.event_start = string_or(j, "event_start", "");
  r.event_end = string_or(j, "event_end", "");
  r.reporting_firm_id = string_or(j, "reporting_firm_id", "");
  r.narrative = string_or(j, "narrative", "");
  r.absolute_buy_volume = require_number(j, "absolute_buy_volume");
  r.absolute_sell_volume = require_number(j, "absolute_sell_volume");
  r.absolute_ai_buy_volume = require_number(j, "absolute_ai_buy_volume");
  r.absolute_ai_sell_volume = require_number(j, "absolute_ai_sell_volume");
  r.market_total_buy_volume = require_number(j, "market_total_buy_volume");
  r.market_total_sell_volume = require_number(j, "market_total_sell_volume");
  r.trailing_30d_avg_volume = require_number(j, "trailing_30d_avg_volume");
  return r;
}

RedactionPolicy redaction_policy_from_json(const nlohmann::json& j) {
  RedactionPolicy p;
  if (const auto it = j.find("bucket_edges"); it != j.end()) {
    if (!it->is_array()) {
      throw ParseError("bucket_edges", it->dump(), "bucket_edges must be an array of numbers");
    }
    for (const auto& e : *it) {
      if (!e.is_number()) {
        throw ParseError("bucket_edges", e.dump(), "bucket_edges entries must be numbers");
      }
      p.bucket_edges.push_back(e.get<double>());
    }
  }
  p.strict_mode = bool_or(j, "strict_mode", true);
  if (const auto it = j.find("denylist"); it != j.end()) {
    if (!it->is_array()) {
      throw ParseError("denylist", it->dump(), "denylist must be an array of patterns");
    }
    for (const auto& e : *it) {
      if (!e.is_string()) {
        throw ParseError("denylist", e.dump(), "denylist entries must be strings");
      }
      p.denylist.push_back(e.get<std::string>());
    }
  }
  p.rounding = static_cast<int>(number_or(j, "rounding", 1));
  if (p.rounding < 0) {
    throw ParseError("rounding", std::to_string(p.rounding), "rounding must be >= 0");
  }
  return p;
}

nlohmann::json redaction_policy_to_json(const RedactionPolicy& p) {
  json j;
  j["bucket_edges"] = p.bucket_edges;
  j["strict_mode"] = p.strict_mode;
  j["denylist"] = p.denylist;
  j["rounding"] = p.rounding;
  return j;
}

SignificancePolicy significance_policy_from_json(const nlohmann::json& j) {
  SignificancePolicy p;
  p.price_deviation_threshold_pct = number_or(j, "price_deviation_threshold_pct", 5.0);
  p.volume_anomaly_threshold_pct = number_or(j, "volume_anomaly_threshold_pct", 20.0);
  if (!(p.price_deviation_threshold_pct > 0) || !(p.volume_anomaly_threshold_pct > 0)) {
    throw ParseError("significance", j.dump(), "significance thresholds must be > 0");
  }
  return p;
}

nlohmann::json significance_policy_to_json(const SignificancePolicy& p) {
  json j;
  j["price_deviation_threshold_pct"] = p.price_deviation_threshold_pct;
  j["volume_anomaly_threshold_pct"] = p.volume_anomaly_threshold_pct;
  return j;
}

nlohmann::json validation_report_to_json(const ValidationReport& report) {
  json j;
  j["ok"] = report.ok;
  json violations = json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"field", v.field}, {"rule", v.rule}, {"message", v.message}});
  }
  j["violations"] = violations;
  return j;
}

nlohmann::json findings_to_json(const std::vector<LeakageFinding>& findings) {
  nlohmann::json arr = json::array();
  for (const auto& f : findings) {
    arr.push_back({{"location", f.location},
                   {"kind", std::string(to_token(f.kind))},
                   {"matched_text", f.matched_text}});
  }
  return arr;
}

} // namespace aiir
