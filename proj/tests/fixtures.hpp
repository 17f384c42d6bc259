// Shared record factories for the unit tests.
#pragma once

#include <vector>

#include "aiir/incident.hpp"

namespace fixtures {

// A record that passes strict validation in the builtin region domain.
inline aiir::IncidentRecord valid_record() {
  aiir::IncidentRecord r;
  r.instrument_category = aiir::InstrumentCategory::Derv;
  r.market_region = "EMEA";
  r.total_buy_volume_pct = 12.8;
  r.total_sell_volume_pct = 11.1;
  r.ai_buy_volume_pct = 6.9;
  r.ai_sell_volume_pct = 5.6;
  r.price_range_pct = 14.5;
  r.volume_vs_30d = aiir::VolumeVs30d::exact(135.7);
  r.market_impact_detected = true;
  r.issue_flag = false;
  r.ai_system_category = aiir::AISystemCategory::SmartOrderRouting;
  r.incident_pattern = aiir::IncidentPattern::InformationAdvantage;
  r.human_oversight_involved = false;
  r.fail_safe_triggered = false;
  return r;
}

} // namespace fixtures
