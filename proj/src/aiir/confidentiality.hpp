#pragma once

// Redaction pipeline: converts rich internal incident reports into public
// IncidentRecords by omitting timestamps/identifiers/narrative, converting
// absolute volumes to market-share percentages, and optionally coarsening the
// 30-day volume ratio into buckets. A pattern scanner verifies that no
// temporal or identifying material survives serialization.

#include <stdexcept>
#include <string>
#include <vector>

#include "aiir/incident.hpp"

namespace aiir {

// The pre-redaction record a regulator holds. Shared business fields mirror
// IncidentRecord; the four public volume percentages and the 30-day ratio are
// *derived* at redaction time from the absolute figures below, so they are
// not stored here (storing both would invite inconsistency).
struct InternalReport {
  InstrumentCategory instrument_category = InstrumentCategory::Equity;
  std::string market_region = "EMEA";
  double price_range_pct = 0.0;
  bool market_impact_detected = false;
  bool issue_flag = false;
  AISystemCategory ai_system_category = AISystemCategory::AlgorithmicTrading;
  IncidentPattern incident_pattern = IncidentPattern::AnomalyDetection;
  bool human_oversight_involved = false;
  bool fail_safe_triggered = false;

  // Confidential material, never emitted.
  std::string event_start;       // ISO-8601
  std::string event_end;         // ISO-8601
  std::string reporting_firm_id; // opaque
  std::string narrative;         // free text

  // Instrument units; converted to percentages on the way out.
  double absolute_buy_volume = 0.0;
  double absolute_sell_volume = 0.0;
  double absolute_ai_buy_volume = 0.0;
  double absolute_ai_sell_volume = 0.0;
  double market_total_buy_volume = 0.0;
  double market_total_sell_volume = 0.0;
  double trailing_30d_avg_volume = 0.0;
};

struct RedactionPolicy {
  // Ascending percent edges for volume_vs_30d bucketing, starting at 0.
  // Empty = emit the exact value.
  std::vector<double> bucket_edges;
  bool strict_mode = true;
  // Regex patterns for firm names/identifiers the scanner must flag.
  std::vector<std::string> denylist;
  // Decimal places for emitted percents (round half away from zero).
  int rounding = 1;
};

enum class LeakKind { Temporal, Identifier, Narrative };

struct LeakageFinding {
  std::string location;     // JSON field name, or "text" for unstructured input
  LeakKind kind = LeakKind::Temporal;
  std::string matched_text; // non-empty
};

std::string_view to_token(LeakKind kind);

// Thrown when a redacted record fails validation (e.g. AI volume above firm
// volume under a strict policy). Carries the offending report.
class RedactionError : public std::runtime_error {
public:
  RedactionError(std::string message, ValidationReport report)
      : std::runtime_error(std::move(message)), report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

private:
  ValidationReport report_;
};

// Rounds to `decimals` places, half away from zero (1.25 → 1.3 at 1 dp).
double round_percent(double value, int decimals);

// Label of the half-open interval [L,U) of `edges` containing pct, as
// "L-U%"; values at or beyond the last edge yield "≥E%". Edges must be
// strictly ascending from 0; pct must be non-negative.
std::string bucket_volume(double pct, const std::vector<double>& edges);

// Produces the public record: drops timestamps/firm id/narrative, converts
// absolute volumes to market-share percents (firm and AI volumes share the
// market-total denominator, so AI ≤ Total holds by construction), computes
// the combined-volume 30-day ratio, rounds, buckets, then validates.
// Throws std::domain_error on zero market totals or 30-day average, and
// RedactionError when the output fails validation.
IncidentRecord redact(const InternalReport& report, const RedactionPolicy& policy);

// Scans serialized text for confidential material. JSON input is scanned
// field-by-field (findings name the field); other text is scanned as one
// blob with location "text". The pattern table, applied in order with
// already-matched spans masked so one datum yields one finding:
//   1. ISO-8601 dates and datetimes       → temporal
//   2. standalone clock times HH:MM[:SS]  → temporal
//   3. bare 10–13 digit integers (epoch)  → temporal
//   4. month-name + year phrases          → temporal
//   5. policy denylist regexes            → identifier
// JSON fields named event_start/event_end (temporal), reporting_firm_id
// (identifier), and narrative (narrative) are flagged by presence alone.
std::vector<LeakageFinding> leakage_scan(const std::string& serialized_record,
                                         const RedactionPolicy& policy);

} // namespace aiir
