#pragma once

// Reporting gate: only incidents with a large enough price move or volume
// anomaly are admitted to the store.

#include <optional>
#include <vector>

#include "aiir/incident.hpp"

namespace aiir {

struct SignificancePolicy {
  double price_deviation_threshold_pct = 5.0;
  double volume_anomaly_threshold_pct = 20.0;
};

// Outcome of the gate for one record. `significant` is the OR of the two
// trigger flags.
struct SignificanceVerdict {
  bool significant = false;
  bool price_trigger = false;
  bool volume_trigger = false;
};

// Tri-state volume trigger for bucketed submissions: a bucket interval may
// contain both anomalous and unremarkable values.
enum class TriState { False, True, Indeterminate };

struct BucketedVerdict {
  bool significant = false; // true iff price triggers or volume is definitely True
  bool price_trigger = false;
  TriState volume_trigger = TriState::Indeterminate;
};

// Exact-value assessment. price triggers when price_range_pct exceeds the
// threshold strictly; volume triggers when the ratio-to-30-day-average
// deviates from 100 by strictly more than the threshold (two-sided).
SignificanceVerdict assess(double price_range_pct, double volume_vs_30d_pct,
                           const SignificancePolicy& policy = {});

// Bucketed assessment over the half-open interval the label denotes under
// `edges`. volume_trigger is True only when every value in the interval
// deviates > threshold, False only when none does, Indeterminate otherwise.
// Throws ParseError for labels that bucket_volume could not have produced.
BucketedVerdict assess_bucketed(double price_range_pct, const std::string& bucket,
                                const std::vector<double>& edges,
                                const SignificancePolicy& policy = {});

// Gate for a whole record: dispatches on exact vs bucketed volume. Bucketed
// records with indeterminate volume are significant only via price.
SignificanceVerdict assess_record(const IncidentRecord& record,
                                  const SignificancePolicy& policy = {},
                                  const std::vector<double>& edges = {0, 100, 200});

} // namespace aiir
