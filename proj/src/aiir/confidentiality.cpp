#include "aiir/confidentiality.hpp"

#include <cmath>
#include <regex>

#include <json.hpp>

#include "aiir/text.hpp"

namespace aiir {

std::string_view to_token(LeakKind kind) {
  switch (kind) {
    case LeakKind::Temporal: return "temporal";
    case LeakKind::Identifier: return "identifier";
    case LeakKind::Narrative: return "narrative";
  }
  return "temporal";
}

double round_percent(double value, int decimals) {
  if (decimals < 0) {
    throw std::invalid_argument("rounding decimals must be >= 0");
  }
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

namespace {

void check_edges(const std::vector<double>& edges) {
  if (edges.empty()) {
    throw std::invalid_argument("bucket edges must be non-empty");
  }
  if (edges.front() != 0.0) {
    throw std::invalid_argument("bucket edges must start at 0");
  }
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) {
      throw std::invalid_argument("bucket edges must be strictly ascending");
    }
  }
}

} // namespace

std::string bucket_volume(double pct, const std::vector<double>& edges) {
  check_edges(edges);
  if (!(pct >= 0.0)) {
    throw std::domain_error("bucket_volume requires a non-negative percent");
  }
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (pct >= edges[i] && pct < edges[i + 1]) {
      return format_double(edges[i]) + "-" + format_double(edges[i + 1]) + "%";
    }
  }
  return "≥" + format_double(edges.back()) + "%";
}

IncidentRecord redact(const InternalReport& report, const RedactionPolicy& policy) {
  if (!(report.market_total_buy_volume > 0.0) || !(report.market_total_sell_volume > 0.0)) {
    throw std::domain_error("redact requires positive market total volumes");
  }
  if (!(report.trailing_30d_avg_volume > 0.0)) {
    throw std::domain_error("redact requires a positive trailing 30-day average volume");
  }
  if (!policy.bucket_edges.empty()) {
    check_edges(policy.bucket_edges);
  }

  IncidentRecord record;
  record.instrument_category = report.instrument_category;
  record.market_region = normalize_token(report.market_region);
  record.market_impact_detected = report.market_impact_detected;
  record.issue_flag = report.issue_flag;
  record.ai_system_category = report.ai_system_category;
  record.incident_pattern = report.incident_pattern;
  record.human_oversight_involved = report.human_oversight_involved;
  record.fail_safe_triggered = report.fail_safe_triggered;

  const int dp = policy.rounding;
  record.total_buy_volume_pct =
      round_percent(100.0 * report.absolute_buy_volume / report.market_total_buy_volume, dp);
  record.total_sell_volume_pct =
      round_percent(100.0 * report.absolute_sell_volume / report.market_total_sell_volume, dp);
  record.ai_buy_volume_pct =
      round_percent(100.0 * report.absolute_ai_buy_volume / report.market_total_buy_volume, dp);
  record.ai_sell_volume_pct =
      round_percent(100.0 * report.absolute_ai_sell_volume / report.market_total_sell_volume, dp);
  record.price_range_pct = round_percent(report.price_range_pct, dp);

  const double ratio = round_percent(
      100.0 * (report.absolute_buy_volume + report.absolute_sell_volume) /
          report.trailing_30d_avg_volume,
      dp);
  if (policy.bucket_edges.empty()) {
    record.volume_vs_30d = VolumeVs30d::exact(ratio);
  } else {
    record.volume_vs_30d = VolumeVs30d::bucket(bucket_volume(ratio, policy.bucket_edges));
  }

  const ValidationReport validation = validate_record(
      record, policy.strict_mode ? ValidationMode::Strict : ValidationMode::Lenient);
  if (!validation.ok) {
    std::string message = "redacted record fails validation:";
    for (const auto& v : validation.violations) {
      message += " [" + v.field + "] " + v.message + ";";
    }
    throw RedactionError(std::move(message), validation);
  }
  return record;
}

namespace {

// Boundary requirement applied around a regex match. std::regex has no
// lookbehind, so token isolation is checked by hand on the surrounding
// characters.
enum class Boundary {
  None,    // accept any match
  NoDigit, // reject when a digit abuts the match ("112:34" is not a time)
  NoToken, // reject digits, letters, or '.' ("1234567890.5" is a decimal,
           // "id1700000000" an identifier fragment, not an epoch)
};

// One scanner rule: a regex plus the finding kind it produces. Rules run in
// table order over a shared mask so a span claimed by an earlier rule is
// invisible to later ones ("2024-08-05T09:30:00Z" is one datetime, not a
// datetime plus a clock time).
struct ScanRule {
  std::regex pattern;
  LeakKind kind;
  Boundary boundary;
};

const std::vector<ScanRule>& builtin_rules() {
  static const std::vector<ScanRule> rules = [] {
    std::vector<ScanRule> r;
    const auto flags = std::regex::ECMAScript | std::regex::optimize;
    // ISO-8601 date, optionally with time and zone designator.
    r.push_back({std::regex(R"(\d{4}-\d{2}-\d{2}([T ]\d{2}:\d{2}(:\d{2}(\.\d+)?)?(Z|[+-]\d{2}:?\d{2})?)?)",
                            flags),
                 LeakKind::Temporal, Boundary::NoDigit});
    // Standalone clock time.
    r.push_back({std::regex(R"(\d{1,2}:\d{2}(:\d{2}(\.\d+)?)?(Z|\s?[AaPp][Mm])?)", flags),
                 LeakKind::Temporal, Boundary::NoDigit});
    // Epoch-like integer: 10-13 digits standing alone.
    r.push_back({std::regex(R"(\d{10,13})", flags), LeakKind::Temporal, Boundary::NoToken});
    // Month-name phrases: "August 5, 2024", "Aug 2024".
    r.push_back({std::regex(R"((Jan(uary)?|Feb(ruary)?|Mar(ch)?|Apr(il)?|May|Jun(e)?|Jul(y)?|Aug(ust)?|Sep(t|tember)?|Oct(ober)?|Nov(ember)?|Dec(ember)?)\.?\s+(\d{1,2}(st|nd|rd|th)?,?\s+)?\d{4})",
                            flags | std::regex::icase),
                 LeakKind::Temporal, Boundary::None});
    return r;
  }();
  return rules;
}

bool boundary_ok(const std::string& text, std::size_t begin, std::size_t end, Boundary mode) {
  if (mode == Boundary::None) return true;
  auto is_joined = [mode](char c) {
    if (c >= '0' && c <= '9') return true;
    if (mode == Boundary::NoToken) {
      return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '.';
    }
    return false;
  };
  if (begin > 0 && is_joined(text[begin - 1])) return false;
  if (end < text.size() && is_joined(text[end])) return false;
  return true;
}

void scan_text(const std::string& text, const std::string& location,
               const RedactionPolicy& policy, std::vector<LeakageFinding>& findings) {
  std::vector<bool> masked(text.size(), false);
  auto span_free = [&masked](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      if (masked[i]) return false;
    }
    return true;
  };
  auto claim = [&masked](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) masked[i] = true;
  };

  auto run_rule = [&](const std::regex& pattern, LeakKind kind, Boundary boundary) {
    for (auto it = std::sregex_iterator(text.begin(), text.end(), pattern);
         it != std::sregex_iterator(); ++it) {
      const auto begin = static_cast<std::size_t>(it->position());
      const auto end = begin + static_cast<std::size_t>(it->length());
      if (begin == end || !span_free(begin, end)) continue;
      if (!boundary_ok(text, begin, end, boundary)) continue;
      findings.push_back({location, kind, it->str()});
      claim(begin, end);
    }
  };

  for (const auto& rule : builtin_rules()) {
    run_rule(rule.pattern, rule.kind, rule.boundary);
  }
  for (const auto& entry : policy.denylist) {
    run_rule(std::regex(entry, std::regex::ECMAScript | std::regex::icase), LeakKind::Identifier,
             Boundary::None);
  }
}

void scan_json(const nlohmann::json& node, const std::string& path,
               const RedactionPolicy& policy, std::vector<LeakageFinding>& findings) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items()) {
      const std::string child = path.empty() ? key : path + "." + key;
      // Confidential field names leak by presence, whatever the value.
      auto presence_text = [&key](const nlohmann::json& v) {
        const std::string text = v.is_string() ? v.get<std::string>() : v.dump();
        return text.empty() ? key : text;
      };
      if (key == "event_start" || key == "event_end") {
        findings.push_back({child, LeakKind::Temporal, presence_text(value)});
        continue;
      }
      if (key == "reporting_firm_id") {
        findings.push_back({child, LeakKind::Identifier, presence_text(value)});
        continue;
      }
      if (key == "narrative") {
        if (!value.is_string() || !value.get<std::string>().empty()) {
          findings.push_back({child, LeakKind::Narrative, presence_text(value)});
        }
        continue;
      }
      scan_json(value, child, policy, findings);
    }
  } else if (node.is_array()) {
    std::size_t index = 0;
    for (const auto& value : node) {
      scan_json(value, path + "[" + std::to_string(index++) + "]", policy, findings);
    }
  } else if (node.is_string()) {
    scan_text(node.get<std::string>(), path.empty() ? "text" : path, policy, findings);
  } else if (node.is_number()) {
    scan_text(node.dump(), path.empty() ? "text" : path, policy, findings);
  }
}

} // namespace

std::vector<LeakageFinding> leakage_scan(const std::string& serialized_record,
                                         const RedactionPolicy& policy) {
  std::vector<LeakageFinding> findings;
  const auto parsed = nlohmann::json::parse(serialized_record, nullptr, false);
  if (!parsed.is_discarded() && (parsed.is_object() || parsed.is_array())) {
    scan_json(parsed, "", policy, findings);
  } else {
    scan_text(serialized_record, "text", policy, findings);
  }
  return findings;
}

} // namespace aiir
