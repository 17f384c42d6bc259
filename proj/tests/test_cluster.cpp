#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "aiir/cluster.hpp"
#include "fixtures.hpp"

using namespace aiir;

namespace {

double sq_dist(const Matrix& points, std::size_t row, const Matrix& centroids,
               std::size_t cluster) {
  double d = 0.0;
  for (std::size_t j = 0; j < points.cols; ++j) {
    const double diff = points.at(row, j) - centroids.at(cluster, j);
    d += diff * diff;
  }
  return d;
}

// Hand-built feature matrix (bypassing standardize) for geometry tests.
FeatureMatrix plain_matrix(const std::vector<std::vector<double>>& rows) {
  FeatureMatrix m;
  m.values = Matrix(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m.values.at(i, j) = rows[i][j];
    m.record_indices.push_back(i);
  }
  m.means.assign(m.values.cols, 0.0);
  m.stddevs.assign(m.values.cols, 1.0);
  m.constant_columns.assign(m.values.cols, false);
  return m;
}

IncidentRecord feature_record(double total_buy, double total_sell, double ai_buy,
                              double ai_sell, double price, double vol30) {
  auto r = fixtures::valid_record();
  r.total_buy_volume_pct = total_buy;
  r.total_sell_volume_pct = total_sell;
  r.ai_buy_volume_pct = ai_buy;
  r.ai_sell_volume_pct = ai_sell;
  r.price_range_pct = price;
  r.volume_vs_30d = VolumeVs30d::exact(vol30);
  return r;
}

} // namespace

TEST_CASE("feature_columns is the fixed six-column list") {
  const auto& cols = feature_columns();
  REQUIRE(cols.size() == 6);
  CHECK(cols[0] == "total_buy_volume_pct");
  CHECK(cols[1] == "total_sell_volume_pct");
  CHECK(cols[2] == "ai_buy_volume_pct");
  CHECK(cols[3] == "ai_sell_volume_pct");
  CHECK(cols[4] == "price_range_pct");
  CHECK(cols[5] == "volume_vs_30d_avg_pct");
}

TEST_CASE("standardize produces zero-mean unit-variance columns") {
  std::vector<IncidentRecord> records = {
      feature_record(10, 20, 5, 5, 10, 80),
      feature_record(20, 20, 10, 5, 20, 120),
      feature_record(30, 20, 15, 5, 30, 160),
  };
  const FeatureMatrix m = standardize(records);
  REQUIRE(m.values.rows == 3);
  REQUIRE(m.values.cols == 6);

  // Column 0: values 10,20,30 -> mean 20, population stddev sqrt(200/3).
  CHECK(m.means[0] == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(m.stddevs[0] == doctest::Approx(std::sqrt(200.0 / 3.0)).epsilon(1e-12));
  for (std::size_t j = 0; j < 6; ++j) {
    double sum = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      sum += m.values.at(i, j);
      sq += m.values.at(i, j) * m.values.at(i, j);
    }
    CHECK(sum == doctest::Approx(0.0).epsilon(1e-9));
    if (!m.constant_columns[j]) {
      CHECK(sq / 3.0 == doctest::Approx(1.0).epsilon(1e-9));
    }
  }

  // Column 1 (total_sell) and column 3 (ai_sell) are constant.
  CHECK(m.constant_columns[1]);
  CHECK(m.constant_columns[3]);
  CHECK(!m.constant_columns[0]);
  for (std::size_t i = 0; i < 3; ++i) CHECK(m.values.at(i, 1) == 0.0);
}

TEST_CASE("standardize skips bucketed rows and maps indices") {
  auto bucketed = feature_record(10, 10, 5, 5, 10, 0);
  bucketed.volume_vs_30d = VolumeVs30d::bucket("100-200%");
  std::vector<IncidentRecord> records = {
      feature_record(10, 20, 5, 5, 10, 80),
      bucketed,
      feature_record(30, 20, 15, 5, 30, 160),
  };
  const FeatureMatrix m = standardize(records);
  REQUIRE(m.values.rows == 2);
  CHECK(m.record_indices == std::vector<std::size_t>{0, 2});
}

TEST_CASE("standardize requires two usable rows") {
  std::vector<IncidentRecord> one = {feature_record(10, 20, 5, 5, 10, 80)};
  CHECK_THROWS_AS(standardize(one), std::invalid_argument);
  auto bucketed = feature_record(10, 10, 5, 5, 10, 0);
  bucketed.volume_vs_30d = VolumeVs30d::bucket("0-100%");
  std::vector<IncidentRecord> mostly_bucketed = {bucketed, bucketed,
                                                 feature_record(1, 2, 0, 1, 3, 90)};
  CHECK_THROWS_AS(standardize(mostly_bucketed), std::invalid_argument);
}

TEST_CASE("jacobi eigensolver on a hand-built 2x2") {
  Matrix s(2, 2);
  s.at(0, 0) = 2.0;
  s.at(0, 1) = 1.0;
  s.at(1, 0) = 1.0;
  s.at(1, 1) = 2.0;
  const EigenDecomposition eig = jacobi_eigen(s);
  REQUIRE(eig.values.size() == 2);
  CHECK(eig.values[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(eig.values[1] == doctest::Approx(1.0).epsilon(1e-12));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  // Sign convention: the largest-magnitude entry (ties at the lowest index)
  // is positive.
  CHECK(eig.vectors.at(0, 0) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
  CHECK(eig.vectors.at(1, 0) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
  CHECK(eig.vectors.at(0, 1) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
  CHECK(eig.vectors.at(1, 1) == doctest::Approx(-inv_sqrt2).epsilon(1e-12));
}

TEST_CASE("jacobi eigensolver reconstructs a 3x3 and orders eigenvalues") {
  Matrix s(3, 3);
  const double entries[3][3] = {{4, 1, 0.5}, {1, 3, 0.25}, {0.5, 0.25, 2}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) s.at(i, j) = entries[i][j];
  }
  const EigenDecomposition eig = jacobi_eigen(s);
  CHECK(eig.values[0] >= eig.values[1]);
  CHECK(eig.values[1] >= eig.values[2]);
  // Trace and Frobenius norm are invariants.
  CHECK(eig.values[0] + eig.values[1] + eig.values[2] == doctest::Approx(9.0).epsilon(1e-12));
  // S v = lambda v for each pair.
  for (int p = 0; p < 3; ++p) {
    for (int i = 0; i < 3; ++i) {
      double sv = 0.0;
      for (int j = 0; j < 3; ++j) sv += entries[i][j] * eig.vectors.at(j, p);
      CHECK(sv == doctest::Approx(eig.values[p] * eig.vectors.at(i, p)).epsilon(1e-10));
    }
  }
  // Eigenvectors are orthonormal.
  for (int p = 0; p < 3; ++p) {
    for (int q = 0; q < 3; ++q) {
      double dot = 0.0;
      for (int i = 0; i < 3; ++i) dot += eig.vectors.at(i, p) * eig.vectors.at(i, q);
      CHECK(dot == doctest::Approx(p == q ? 1.0 : 0.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("jacobi rejects asymmetric input and handles diagonal matrices") {
  Matrix bad(2, 2);
  bad.at(0, 1) = 1.0;
  bad.at(1, 0) = 2.0;
  CHECK_THROWS_AS(jacobi_eigen(bad), std::invalid_argument);

  Matrix diag(3, 3);
  diag.at(0, 0) = 1.0;
  diag.at(1, 1) = 5.0;
  diag.at(2, 2) = 3.0;
  const auto eig = jacobi_eigen(diag);
  CHECK(eig.values == std::vector<double>{5.0, 3.0, 1.0});
  CHECK(eig.vectors.at(1, 0) == 1.0); // eigenvector of 5 is e2, sign-fixed
}

TEST_CASE("kmeans recovers separated planar blobs") {
  std::vector<std::vector<double>> rows;
  const double centers[3][2] = {{0, 0}, {100, 0}, {0, 100}};
  for (const auto& c : centers) {
    for (int i = 0; i < 5; ++i) {
      rows.push_back({c[0] + 0.1 * i, c[1] - 0.1 * i});
    }
  }
  const FeatureMatrix m = plain_matrix(rows);
  const ClusterModel model = kmeans(m, 3, /*seed=*/1);
  CHECK(model.k == 3);
  CHECK(model.assignments.size() == 15);

  // All five members of a blob share a label, and the three labels differ.
  std::set<std::size_t> labels;
  for (int blob = 0; blob < 3; ++blob) {
    const std::size_t label = model.assignments[blob * 5];
    labels.insert(label);
    for (int i = 0; i < 5; ++i) CHECK(model.assignments[blob * 5 + i] == label);
  }
  CHECK(labels.size() == 3);

  // Final assignment is nearest-centroid, and inertia matches it.
  double expected_inertia = 0.0;
  for (std::size_t i = 0; i < m.values.rows; ++i) {
    const double assigned = sq_dist(m.values, i, model.centroids, model.assignments[i]);
    for (std::size_t c = 0; c < model.k; ++c) {
      CHECK(assigned <= sq_dist(m.values, i, model.centroids, c) + 1e-12);
    }
    expected_inertia += assigned;
  }
  CHECK(model.inertia == doctest::Approx(expected_inertia).epsilon(1e-12));
}

TEST_CASE("kmeans is deterministic for a fixed seed and varies across seeds") {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 40; ++i) {
    rows.push_back({std::sin(0.7 * i) * 10.0, std::cos(1.3 * i) * 10.0});
  }
  const FeatureMatrix m = plain_matrix(rows);
  const ClusterModel a = kmeans(m, 4, 7);
  const ClusterModel b = kmeans(m, 4, 7);
  CHECK(a.assignments == b.assignments);
  CHECK(a.inertia == b.inertia);
  CHECK(a.centroids.data == b.centroids.data);
  CHECK(a.seed == 7);
}

TEST_CASE("kmeans edge cases") {
  const FeatureMatrix m = plain_matrix({{0, 0}, {1, 0}, {2, 0}, {3, 0}});
  CHECK_THROWS_AS(kmeans(m, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(kmeans(m, 5, 1), std::invalid_argument);

  const ClusterModel one = kmeans(m, 1, 1);
  CHECK(one.centroids.at(0, 0) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(one.inertia == doctest::Approx(0.25 * (9.0 + 1.0 + 1.0 + 9.0) * 1.0).epsilon(1e-12));

  const ClusterModel full = kmeans(m, 4, 1);
  CHECK(full.inertia == doctest::Approx(0.0).epsilon(1e-12));
  std::set<std::size_t> assigned(full.assignments.begin(), full.assignments.end());
  CHECK(assigned.size() == 4);
}

TEST_CASE("equidistant points break ties to the lowest centroid index") {
  // Two identical points and k = 2: whatever the centroids, the assignment
  // of a point equidistant to both must pick the lower index.
  const FeatureMatrix m = plain_matrix({{0, 0}, {2, 0}, {1, 0}});
  const ClusterModel model = kmeans(m, 2, 3);
  for (std::size_t i = 0; i < m.values.rows; ++i) {
    const double d0 = sq_dist(m.values, i, model.centroids, 0);
    const double d1 = sq_dist(m.values, i, model.centroids, 1);
    if (d0 == d1) CHECK(model.assignments[i] == 0);
  }
}

TEST_CASE("pca on data with covariance [[2,1],[1,2]]") {
  const double r3 = std::sqrt(3.0);
  const FeatureMatrix m = plain_matrix({{r3, r3}, {-r3, -r3}, {1, -1}, {-1, 1}});
  const PcaModel model = pca(m);
  REQUIRE(model.eigenvalues.size() == 2);
  CHECK(model.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(model.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(model.explained_variance_ratios[0] == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(model.explained_variance_ratios[1] == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(model.explained_variance_ratios[0] + model.explained_variance_ratios[1] ==
        doctest::Approx(1.0).epsilon(1e-9));

  // Projection: first point lies on the (1,1) axis.
  REQUIRE(model.projection.rows == 4);
  REQUIRE(model.projection.cols == 2);
  CHECK(model.projection.at(0, 0) == doctest::Approx(std::sqrt(6.0)).epsilon(1e-9));
  CHECK(model.projection.at(0, 1) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(model.projection.at(2, 0) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(model.projection.at(2, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("pca ratios are descending and sum to one on generic data") {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 50; ++i) {
    rows.push_back({std::sin(0.3 * i), std::cos(0.9 * i) * 2.0, std::sin(1.7 * i + 0.4)});
  }
  // Center the columns so the covariance convention holds.
  for (std::size_t j = 0; j < 3; ++j) {
    double mean = 0.0;
    for (const auto& r : rows) mean += r[j];
    mean /= static_cast<double>(rows.size());
    for (auto& r : rows) r[j] -= mean;
  }
  const PcaModel model = pca(plain_matrix(rows));
  double sum = 0.0;
  for (std::size_t i = 0; i < model.explained_variance_ratios.size(); ++i) {
    sum += model.explained_variance_ratios[i];
    if (i > 0) {
      CHECK(model.explained_variance_ratios[i] <= model.explained_variance_ratios[i - 1]);
    }
    CHECK(model.explained_variance_ratios[i] >= 0.0);
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("rank-1 data concentrates all variance in PC1") {
  const FeatureMatrix m = plain_matrix({{1, 2}, {-1, -2}, {2, 4}, {-2, -4}});
  const PcaModel model = pca(m);
  CHECK(model.explained_variance_ratios[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(model.explained_variance_ratios[1] == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("zone labeling identifies the five constructed profiles") {
  std::vector<IncidentRecord> records;
  // Twelve members per blob; per-member nudges keep blobs tight relative to
  // their separation. Feature order: total_buy, total_sell, ai_buy, ai_sell,
  // price, vol30.
  auto add_blob = [&records](double total, double ai, double price, double vol30,
                             double spread) {
    for (int i = 0; i < 12; ++i) {
      const double t = (i - 5.5) / 5.5; // [-1, 1]
      records.push_back(feature_record(total + spread * t, total - spread * t,
                                       ai + 0.5 * spread * t, ai - 0.5 * spread * t,
                                       price + 0.2 * spread * t, vol30 + spread * t));
    }
  };
  add_blob(20.0, 18.0, 30.0, 260.0, 0.5); // anomalous: ai share 90%, top price
  add_blob(40.0, 10.0, 1.0, 100.0, 0.5);  // stable: quiet volume, low price
  add_blob(60.0, 20.0, 12.0, 150.0, 4.0); // irregular: widest internal spread
  add_blob(80.0, 30.0, 8.0, 120.0, 0.05); // strategic: tightest spread
  add_blob(50.0, 15.0, 18.0, 60.0, 0.8);  // the transition remainder

  const FeatureMatrix m = standardize(records);
  const ClusterModel model = kmeans(m, 5, 11);
  const PcaModel projection = pca(m);
  const ZoneMap zones = label_zones(model, projection, m, records);

  REQUIRE(zones.labels.size() == 5);
  CHECK(!zones.degenerate);
  CHECK(zones.version == "zones/1");

  // Map blob -> cluster via the first member of each blob, then check labels.
  auto cluster_of_blob = [&model](std::size_t blob) { return model.assignments[blob * 12]; };
  // All blobs must be pure for the mapping to mean anything.
  for (std::size_t blob = 0; blob < 5; ++blob) {
    for (int i = 0; i < 12; ++i) {
      REQUIRE(model.assignments[blob * 12 + i] == cluster_of_blob(blob));
    }
  }
  CHECK(zones.labels[cluster_of_blob(0)] == "ANOMALOUS");
  CHECK(zones.labels[cluster_of_blob(1)] == "STABLE");
  CHECK(zones.labels[cluster_of_blob(2)] == "IRREGULAR");
  CHECK(zones.labels[cluster_of_blob(3)] == "STRATEGIC");
  CHECK(zones.labels[cluster_of_blob(4)] == "TRANSITION_A");

  // Evidence mirrors the construction.
  const auto& anomalous = zones.evidence[cluster_of_blob(0)];
  CHECK(anomalous.mean_ai_share > 70.0);
  CHECK(anomalous.mean_price_range_pct == doctest::Approx(30.0).epsilon(0.05));
  CHECK(anomalous.size == 12);
  const auto& irregular = zones.evidence[cluster_of_blob(2)];
  const auto& strategic = zones.evidence[cluster_of_blob(3)];
  CHECK(irregular.dispersion > strategic.dispersion);
}

TEST_CASE("zone labeling requires exactly five clusters") {
  const FeatureMatrix m = plain_matrix({{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}});
  const ClusterModel model = kmeans(m, 3, 1);
  const PcaModel projection = pca(m);
  std::vector<IncidentRecord> records(6, fixtures::valid_record());
  CHECK_THROWS_AS(label_zones(model, projection, m, records), std::invalid_argument);
}

TEST_CASE("identical records degrade to index-order labels with the flag set") {
  std::vector<IncidentRecord> records(8, fixtures::valid_record());
  const FeatureMatrix m = standardize(records);
  const ClusterModel model = kmeans(m, 5, 2);
  const PcaModel projection = pca(m);
  const ZoneMap zones = label_zones(model, projection, m, records);
  CHECK(zones.degenerate);
  CHECK(zones.labels == std::vector<std::string>{"ANOMALOUS", "STABLE", "IRREGULAR",
                                                 "STRATEGIC", "TRANSITION_A"});
}
