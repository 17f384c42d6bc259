#pragma once

// Use-case-2 analytics: standardize the six numeric features, run seeded
// K-means (k-means++ initialization, Lloyd iterations) in the standardized
// space, project to two principal components for reporting, and map the five
// clusters onto the five-zone taxonomy.

#include <cstdint>
#include <string>
#include <vector>

#include "aiir/incident.hpp"
#include "aiir/linalg.hpp"

namespace aiir {

// Fixed feature order used everywhere downstream.
const std::vector<std::string>& feature_columns();

struct FeatureMatrix {
  Matrix values;                        // n x 6 z-scores
  std::vector<double> means;            // per column, original units
  std::vector<double> stddevs;          // per column, population
  std::vector<bool> constant_columns;   // stddev == 0; z-scores left at 0
  std::vector<std::size_t> record_indices; // row -> index into the source list
};

// Z-scores with population stddev. Records whose 30-day volume ratio is
// bucketed carry no exact value and are excluded (their indices simply don't
// appear in record_indices). Throws std::invalid_argument when fewer than two
// usable rows remain.
FeatureMatrix standardize(const std::vector<IncidentRecord>& records);

struct ClusterModel {
  std::size_t k = 0;
  Matrix centroids; // k x 6, standardized units
  std::vector<std::size_t> assignments; // per matrix row
  double inertia = 0.0;
  std::vector<double> inertia_history; // objective after each assignment pass
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
};

// Seeded k-means++ then Lloyd iterations until the largest centroid shift
// falls below tol or max_iter passes; a final reassignment guarantees every
// row ends on its nearest centroid (ties break to the lowest index). A
// cluster emptied during an update is reseeded at the point farthest from
// its assigned centroid. Inertia is checked non-increasing every iteration.
// Throws std::invalid_argument for k < 1 or k > n.
ClusterModel kmeans(const FeatureMatrix& matrix, std::size_t k, std::uint64_t seed,
                    std::size_t max_iter = 300, double tol = 1e-6);

struct PcaModel {
  Matrix components;                    // 6 x 6, column j = loading vector j
  std::vector<double> eigenvalues;      // descending
  std::vector<double> explained_variance_ratios; // eigenvalue / trace
  Matrix projection;                    // n x 2 (PC1, PC2)
};

// Eigendecomposition of the population covariance of the standardized
// matrix (cyclic Jacobi, off-diagonal tolerance 1e-12). Eigenvalues sorted
// descending; each loading vector is sign-fixed so its largest-magnitude
// entry is positive. Requires n >= 2.
PcaModel pca(const FeatureMatrix& matrix, std::size_t n_components = 2);

struct ZoneEvidence {
  std::vector<double> centroid_original; // de-standardized centroid, 6 features
  double mean_ai_share = 0.0;            // member mean, undefined rows skipped
  double mean_price_range_pct = 0.0;
  double mean_volume_vs_30d = 0.0;
  double dispersion = 0.0;               // mean squared member distance to centroid
  double centroid_pc1 = 0.0;
  std::size_t size = 0;
};

struct ZoneMap {
  std::vector<std::string> labels;   // per cluster index
  std::vector<ZoneEvidence> evidence;
  bool degenerate = false;           // identical centroids; labels by index
  std::string version = "zones/1";   // taxonomy heuristic version
};

// Maps the five clusters onto zone roles by de-standardized centroid
// statistics, consuming one cluster per step:
//   1. ANOMALOUS  — highest mean price range among clusters whose mean AI
//                   share exceeds 70; if none does, the cluster maximizing
//                   the sum of price and AI-share ranks
//   2. STABLE     — minimizes rank(|mean volume ratio − 100|) + rank(price)
//   3. IRREGULAR  — largest within-cluster dispersion
//   4. STRATEGIC  — smallest within-cluster dispersion
//   5. remainder  — TRANSITION_A (and TRANSITION_B when two remain), ordered
//                   by centroid PC1
// All ties break to the lowest cluster index. Identical centroids degrade to
// index-order labels with the degenerate flag set. Throws
// std::invalid_argument unless model.k == 5.
ZoneMap label_zones(const ClusterModel& model, const PcaModel& pca_model,
                    const FeatureMatrix& matrix, const std::vector<IncidentRecord>& records);

} // namespace aiir
