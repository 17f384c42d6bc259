#include "aiir/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "aiir/rng.hpp"

namespace aiir {

const std::vector<std::string>& feature_columns() {
  static const std::vector<std::string> columns = {
      "total_buy_volume_pct", "total_sell_volume_pct", "ai_buy_volume_pct",
      "ai_sell_volume_pct",   "price_range_pct",       "volume_vs_30d_avg_pct",
  };
  return columns;
}

FeatureMatrix standardize(const std::vector<IncidentRecord>& records) {
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!records[i].volume_vs_30d.is_bucket()) usable.push_back(i);
  }
  if (usable.size() < 2) {
    throw std::invalid_argument("standardize requires at least two rows with exact volume ratios");
  }

  const std::size_t n = usable.size();
  const std::size_t d = feature_columns().size();
  Matrix raw(n, d);
  for (std::size_t row = 0; row < n; ++row) {
    const IncidentRecord& r = records[usable[row]];
    raw.at(row, 0) = r.total_buy_volume_pct;
    raw.at(row, 1) = r.total_sell_volume_pct;
    raw.at(row, 2) = r.ai_buy_volume_pct;
    raw.at(row, 3) = r.ai_sell_volume_pct;
    raw.at(row, 4) = r.price_range_pct;
    raw.at(row, 5) = r.volume_vs_30d.exact_value();
  }

  FeatureMatrix m;
  m.record_indices = std::move(usable);
  m.means.resize(d);
  m.stddevs.resize(d);
  m.constant_columns.assign(d, false);
  m.values = Matrix(n, d);
  for (std::size_t j = 0; j < d; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += raw.at(i, j);
    const double mean = sum / static_cast<double>(n);
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double delta = raw.at(i, j) - mean;
      sq += delta * delta;
    }
    const double stddev = std::sqrt(sq / static_cast<double>(n));
    m.means[j] = mean;
    m.stddevs[j] = stddev;
    if (stddev == 0.0) {
      m.constant_columns[j] = true; // z-scores stay 0
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) {
      m.values.at(i, j) = (raw.at(i, j) - mean) / stddev;
    }
  }
  return m;
}

namespace {

double squared_distance(const Matrix& points, std::size_t row, const Matrix& centroids,
                        std::size_t centroid) {
  double s = 0.0;
  for (std::size_t j = 0; j < points.cols; ++j) {
    const double delta = points.at(row, j) - centroids.at(centroid, j);
    s += delta * delta;
  }
  return s;
}

// Nearest centroid with ties to the lowest index.
std::size_t nearest(const Matrix& points, std::size_t row, const Matrix& centroids) {
  std::size_t best = 0;
  double best_dist = squared_distance(points, row, centroids, 0);
  for (std::size_t c = 1; c < centroids.rows; ++c) {
    const double dist = squared_distance(points, row, centroids, c);
    if (dist < best_dist) {
      best_dist = dist;
      best = c;
    }
  }
  return best;
}

Matrix kmeans_plus_plus(const Matrix& points, std::size_t k, Rng& rng) {
  const std::size_t n = points.rows;
  const std::size_t d = points.cols;
  Matrix centroids(k, d);

  std::size_t first = rng.next_index(n);
  for (std::size_t j = 0; j < d; ++j) centroids.at(0, j) = points.at(first, j);

  std::vector<double> min_dist(n, 0.0);
  for (std::size_t chosen = 1; chosen < k; ++chosen) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < chosen; ++c) {
        best = std::min(best, squared_distance(points, i, centroids, c));
      }
      min_dist[i] = best;
      total += best;
    }
    std::size_t pick;
    if (total == 0.0) {
      // Every point coincides with a chosen centroid; fall back to uniform.
      pick = rng.next_index(n);
    } else {
      const double r = rng.next_double() * total;
      double cumulative = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        cumulative += min_dist[i];
        if (cumulative >= r) {
          pick = i;
          break;
        }
      }
    }
    for (std::size_t j = 0; j < d; ++j) centroids.at(chosen, j) = points.at(pick, j);
  }
  return centroids;
}

} // namespace

ClusterModel kmeans(const FeatureMatrix& matrix, std::size_t k, std::uint64_t seed,
                    std::size_t max_iter, double tol) {
  const Matrix& points = matrix.values;
  const std::size_t n = points.rows;
  const std::size_t d = points.cols;
  if (k < 1) {
    throw std::invalid_argument("kmeans requires k >= 1");
  }
  if (k > n) {
    throw std::invalid_argument("kmeans requires k <= number of rows");
  }

  Rng rng(seed);
  ClusterModel model;
  model.k = k;
  model.seed = seed;
  model.centroids = kmeans_plus_plus(points, k, rng);
  model.assignments.assign(n, 0);

  double previous_inertia = std::numeric_limits<double>::infinity();
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    model.iterations = iter + 1;

    // Assign.
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      model.assignments[i] = nearest(points, i, model.centroids);
      inertia += squared_distance(points, i, model.centroids, model.assignments[i]);
    }
    // Lloyd monotonicity: each assign+update pass can only lower the
    // objective. Tolerate accumulation noise, nothing more.
    if (inertia > previous_inertia * (1.0 + 1e-9) + 1e-12) {
      throw std::logic_error("kmeans inertia increased across an iteration");
    }
    previous_inertia = inertia;
    model.inertia = inertia;
    model.inertia_history.push_back(inertia);

    // Update.
    Matrix updated(k, d);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = model.assignments[i];
      ++counts[c];
      for (std::size_t j = 0; j < d; ++j) updated.at(c, j) += points.at(i, j);
    }
    std::vector<bool> reseed_used(n, false);
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // Reseed an empty cluster at the point currently farthest from its
        // centroid (lowest index on ties; each point reseeds at most one
        // cluster per pass).
        std::size_t farthest = n;
        double worst = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (reseed_used[i]) continue;
          const double dist = squared_distance(points, i, model.centroids, model.assignments[i]);
          if (dist > worst) {
            worst = dist;
            farthest = i;
          }
        }
        reseed_used[farthest] = true;
        for (std::size_t j = 0; j < d; ++j) updated.at(c, j) = points.at(farthest, j);
        // The moved point belongs to the rebuilt cluster on the next pass;
        // the monotonicity baseline no longer applies.
        previous_inertia = std::numeric_limits<double>::infinity();
        continue;
      }
      for (std::size_t j = 0; j < d; ++j) {
        updated.at(c, j) /= static_cast<double>(counts[c]);
      }
    }

    double max_shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      double shift = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double delta = updated.at(c, j) - model.centroids.at(c, j);
        shift += delta * delta;
      }
      max_shift = std::max(max_shift, std::sqrt(shift));
    }
    model.centroids = std::move(updated);
    if (max_shift < tol) break;
  }

  // Final assignment against the final centroids, so the nearest-centroid
  // invariant holds on the returned model.
  double inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    model.assignments[i] = nearest(points, i, model.centroids);
    inertia += squared_distance(points, i, model.centroids, model.assignments[i]);
  }
  model.inertia = inertia;
  return model;
}

PcaModel pca(const FeatureMatrix& matrix, std::size_t n_components) {
  const Matrix& Z = matrix.values;
  const std::size_t n = Z.rows;
  const std::size_t d = Z.cols;
  if (n < 2) {
    throw std::invalid_argument("pca requires at least two rows");
  }

  // Population covariance of the (mean-zero) standardized columns.
  Matrix cov(d, d);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a; b < d; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += Z.at(i, a) * Z.at(i, b);
      s /= static_cast<double>(n);
      cov.at(a, b) = s;
      cov.at(b, a) = s;
    }
  }

  const EigenDecomposition eig = jacobi_eigen(cov, 1e-12);
  PcaModel model;
  model.components = eig.vectors;
  model.eigenvalues = eig.values;

  double trace = 0.0;
  for (double v : eig.values) trace += std::max(v, 0.0);
  model.explained_variance_ratios.resize(d, 0.0);
  if (trace > 0.0) {
    for (std::size_t j = 0; j < d; ++j) {
      model.explained_variance_ratios[j] = std::max(eig.values[j], 0.0) / trace;
    }
  }

  const std::size_t keep = std::min(n_components, d);
  model.projection = Matrix(n, keep);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < keep; ++j) {
      double s = 0.0;
      for (std::size_t f = 0; f < d; ++f) s += Z.at(i, f) * eig.vectors.at(f, j);
      model.projection.at(i, j) = s;
    }
  }
  return model;
}

namespace {

// Ascending rank of each value; ties resolve by index so ranks are a
// permutation (deterministic).
std::vector<std::size_t> ranks_of(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&values](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<std::size_t> rank(values.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) rank[order[pos]] = pos;
  return rank;
}

} // namespace

ZoneMap label_zones(const ClusterModel& model, const PcaModel& pca_model,
                    const FeatureMatrix& matrix, const std::vector<IncidentRecord>& records) {
  if (model.k != 5) {
    throw std::invalid_argument("zone taxonomy requires k = 5");
  }
  const std::size_t k = model.k;
  const std::size_t d = matrix.values.cols;
  const std::size_t n = matrix.values.rows;

  ZoneMap map;
  map.labels.assign(k, "");
  map.evidence.assign(k, ZoneEvidence{});

  for (std::size_t c = 0; c < k; ++c) {
    ZoneEvidence& e = map.evidence[c];
    e.centroid_original.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
      e.centroid_original[j] = matrix.means[j] + matrix.stddevs[j] * model.centroids.at(c, j);
    }
    double pc1 = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      pc1 += model.centroids.at(c, j) * pca_model.components.at(j, 0);
    }
    e.centroid_pc1 = pc1;
  }

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = model.assignments[i];
    ZoneEvidence& e = map.evidence[c];
    ++e.size;
    e.dispersion += squared_distance(matrix.values, i, model.centroids, c);
    const IncidentRecord& r = records[matrix.record_indices[i]];
    e.mean_price_range_pct += r.price_range_pct;
    e.mean_volume_vs_30d += r.volume_vs_30d.exact_value();
  }
  std::vector<std::size_t> share_counts(k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const IncidentRecord& r = records[matrix.record_indices[i]];
    const double denom = r.total_buy_volume_pct + r.total_sell_volume_pct;
    if (denom > 0.0) {
      map.evidence[model.assignments[i]].mean_ai_share += ai_share(r);
      ++share_counts[model.assignments[i]];
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    ZoneEvidence& e = map.evidence[c];
    if (e.size > 0) {
      e.dispersion /= static_cast<double>(e.size);
      e.mean_price_range_pct /= static_cast<double>(e.size);
      e.mean_volume_vs_30d /= static_cast<double>(e.size);
    }
    if (share_counts[c] > 0) e.mean_ai_share /= static_cast<double>(share_counts[c]);
  }

  // Degenerate: all centroids identical -> labels by index.
  bool all_identical = true;
  for (std::size_t c = 1; c < k && all_identical; ++c) {
    for (std::size_t j = 0; j < d; ++j) {
      if (model.centroids.at(c, j) != model.centroids.at(0, j)) {
        all_identical = false;
        break;
      }
    }
  }
  if (all_identical) {
    map.degenerate = true;
    const char* by_index[] = {"ANOMALOUS", "STABLE", "IRREGULAR", "STRATEGIC", "TRANSITION_A"};
    for (std::size_t c = 0; c < k; ++c) map.labels[c] = by_index[c];
    return map;
  }

  std::vector<double> price(k), share(k), vol_dev(k), dispersion(k);
  for (std::size_t c = 0; c < k; ++c) {
    price[c] = map.evidence[c].mean_price_range_pct;
    share[c] = map.evidence[c].mean_ai_share;
    vol_dev[c] = std::abs(map.evidence[c].mean_volume_vs_30d - 100.0);
    dispersion[c] = map.evidence[c].dispersion;
  }
  const std::vector<std::size_t> price_rank = ranks_of(price);
  const std::vector<std::size_t> share_rank = ranks_of(share);
  const std::vector<std::size_t> vol_dev_rank = ranks_of(vol_dev);

  std::vector<bool> taken(k, false);
  auto pick = [&taken, k](auto&& better_than) {
    std::size_t best = k;
    for (std::size_t c = 0; c < k; ++c) {
      if (taken[c]) continue;
      if (best == k || better_than(c, best)) best = c;
    }
    taken[best] = true;
    return best;
  };

  // 1. ANOMALOUS: price-maximal among high-AI clusters, else best combined
  // price+share rank.
  bool any_high_share = false;
  for (std::size_t c = 0; c < k; ++c) {
    if (share[c] > 70.0) any_high_share = true;
  }
  std::size_t anomalous;
  if (any_high_share) {
    anomalous = pick([&](std::size_t c, std::size_t best) {
      const bool c_high = share[c] > 70.0;
      const bool best_high = share[best] > 70.0;
      if (c_high != best_high) return c_high;
      return c_high ? price[c] > price[best] : false;
    });
  } else {
    anomalous = pick([&](std::size_t c, std::size_t best) {
      return price_rank[c] + share_rank[c] > price_rank[best] + share_rank[best];
    });
  }
  map.labels[anomalous] = "ANOMALOUS";

  // 2. STABLE: closest-to-normal volume plus low price, by rank sum.
  const std::size_t stable = pick([&](std::size_t c, std::size_t best) {
    return vol_dev_rank[c] + price_rank[c] < vol_dev_rank[best] + price_rank[best];
  });
  map.labels[stable] = "STABLE";

  // 3. IRREGULAR: widest cluster.
  const std::size_t irregular = pick(
      [&](std::size_t c, std::size_t best) { return dispersion[c] > dispersion[best]; });
  map.labels[irregular] = "IRREGULAR";

  // 4. STRATEGIC: tightest cluster.
  const std::size_t strategic = pick(
      [&](std::size_t c, std::size_t best) { return dispersion[c] < dispersion[best]; });
  map.labels[strategic] = "STRATEGIC";

  // 5. Remainder: TRANSITION_A/B ordered by centroid PC1.
  std::vector<std::size_t> remaining;
  for (std::size_t c = 0; c < k; ++c) {
    if (!taken[c]) remaining.push_back(c);
  }
  std::stable_sort(remaining.begin(), remaining.end(), [&map](std::size_t a, std::size_t b) {
    return map.evidence[a].centroid_pc1 < map.evidence[b].centroid_pc1;
  });
  const char* transition[] = {"TRANSITION_A", "TRANSITION_B"};
  for (std::size_t idx = 0; idx < remaining.size() && idx < 2; ++idx) {
    map.labels[remaining[idx]] = transition[idx];
  }
  return map;
}

} // namespace aiir
