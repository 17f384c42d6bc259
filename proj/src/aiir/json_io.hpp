#pragma once

// JSON wire formats for records, internal reports, and policy files.
//
// Documented key sets (all lower_snake_case):
//   IncidentRecord: serial_no, instrument_category, market_region,
//     total_buy_volume_pct, total_sell_volume_pct, ai_buy_volume_pct,
//     ai_sell_volume_pct, price_range_pct, volume_vs_30d_avg_pct (number when
//     exact, bucket-label string when coarsened), market_impact_detected,
//     issue_flag, ai_system_category, incident_pattern,
//     human_oversight_involved, fail_safe_triggered
//   InternalReport: the shared business fields above (minus the derived
//     volume percents) plus event_start, event_end, reporting_firm_id,
//     narrative, absolute_buy_volume, absolute_sell_volume,
//     absolute_ai_buy_volume, absolute_ai_sell_volume,
//     market_total_buy_volume, market_total_sell_volume,
//     trailing_30d_avg_volume
// Booleans are JSON booleans on output; "YES"/"NO" strings are accepted on
// input for parity with the CSV format.

#include <json.hpp>

#include "aiir/confidentiality.hpp"
#include "aiir/incident.hpp"
#include "aiir/significance.hpp"

namespace aiir {

nlohmann::json record_to_json(const IncidentRecord& record);
IncidentRecord record_from_json(const nlohmann::json& j,
                                const RegionDomain& regions = RegionDomain::builtin());

nlohmann::json internal_report_to_json(const InternalReport& report);
InternalReport internal_report_from_json(const nlohmann::json& j);

RedactionPolicy redaction_policy_from_json(const nlohmann::json& j);
nlohmann::json redaction_policy_to_json(const RedactionPolicy& policy);

SignificancePolicy significance_policy_from_json(const nlohmann::json& j);
nlohmann::json significance_policy_to_json(const SignificancePolicy& policy);

nlohmann::json validation_report_to_json(const ValidationReport& report);
nlohmann::json findings_to_json(const std::vector<LeakageFinding>& findings);

} // namespace aiir
