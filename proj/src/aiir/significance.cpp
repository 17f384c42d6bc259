#include "aiir/significance.hpp"

#include <cmath>
#include <limits>

namespace aiir {

SignificanceVerdict assess(double price_range_pct, double volume_vs_30d_pct,
                           const SignificancePolicy& policy) {
  SignificanceVerdict v;
  v.price_trigger = price_range_pct > policy.price_deviation_threshold_pct;
  v.volume_trigger =
      std::abs(volume_vs_30d_pct - 100.0) > policy.volume_anomaly_threshold_pct;
  v.significant = v.price_trigger || v.volume_trigger;
  return v;
}

BucketedVerdict assess_bucketed(double price_range_pct, const std::string& bucket,
                                const std::vector<double>& edges,
                                const SignificancePolicy& policy) {
  const auto interval = bucket_interval(bucket);
  if (!interval) {
    throw ParseError("Volume_vs_30D_Avg_Pct", bucket, "unknown bucket label '" + bucket + "'");
  }
  // The label must be consistent with the configured edges: its bounds must
  // be adjacent edges (or last-edge-to-infinity).
  if (!edges.empty()) {
    bool consistent = false;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      if (interval->first == edges[i] && interval->second == edges[i + 1]) consistent = true;
    }
    if (interval->first == edges.back() &&
        interval->second == std::numeric_limits<double>::infinity()) {
      consistent = true;
    }
    if (!consistent) {
      throw ParseError("Volume_vs_30D_Avg_Pct", bucket,
                       "bucket label '" + bucket + "' does not match the configured edges");
    }
  }

  const double lo = interval->first;
  const double hi = interval->second; // exclusive (may be +inf)
  const double t = policy.volume_anomaly_threshold_pct;

  BucketedVerdict v;
  v.price_trigger = price_range_pct > policy.price_deviation_threshold_pct;

  // [lo, hi) lies entirely in the anomalous region when it sits wholly above
  // 100+t or wholly at-or-below 100−t (the upper bound is exclusive, so
  // hi ≤ 100−t suffices on the low side; the low bound is inclusive, so the
  // high side needs lo > 100+t).
  if (lo > 100.0 + t || hi <= 100.0 - t) {
    v.volume_trigger = TriState::True;
  } else if (lo >= 100.0 - t && hi <= 100.0 + t) {
    // Entirely inside the unremarkable band [100−t, 100+t]; every value
    // deviates by at most t, which never triggers under strict inequality.
    v.volume_trigger = TriState::False;
  } else {
    v.volume_trigger = TriState::Indeterminate;
  }

  v.significant = v.price_trigger || v.volume_trigger == TriState::True;
  return v;
}

SignificanceVerdict assess_record(const IncidentRecord& record,
                                  const SignificancePolicy& policy,
                                  const std::vector<double>& edges) {
  if (!record.volume_vs_30d.is_bucket()) {
    return assess(record.price_range_pct, record.volume_vs_30d.exact_value(), policy);
  }
  const BucketedVerdict b =
      assess_bucketed(record.price_range_pct, record.volume_vs_30d.bucket_label(), edges, policy);
  SignificanceVerdict v;
  v.price_trigger = b.price_trigger;
  v.volume_trigger = b.volume_trigger == TriState::True;
  v.significant = b.significant;
  return v;
}

} // namespace aiir
