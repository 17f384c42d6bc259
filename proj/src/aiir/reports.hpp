#pragma once

// Report artifact layer: term tables, centroid tables, plot data, and the
// end-to-end desk pipeline (synthesize -> ingest -> both ANOVAs -> cluster ->
// report files). Artifacts are plain CSV/JSON with no timestamps, so two
// runs over the same inputs are byte-identical.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "aiir/anova.hpp"
#include "aiir/cluster.hpp"
#include "aiir/incident.hpp"

namespace aiir {

inline constexpr const char* kSchemaVersion = "v1";

// "term,ss,df,f_stat,p_value,partial_eta_sq" rows plus a trailing residual
// row (empty statistic cells).
std::string anova_term_table_csv(const AnovaResult& result);
nlohmann::json anova_to_json(const AnovaResult& result, const AnovaSpec& spec);

// "serial_no,cluster,zone,pc1,pc2" per clustered row.
std::string cluster_assignments_csv(const ClusterModel& model, const PcaModel& pca_model,
                                    const ZoneMap& zones, const FeatureMatrix& matrix,
                                    const std::vector<IncidentRecord>& records);
// "cluster,zone,size,<six features in original units>,mean_ai_share,
//  dispersion,centroid_pc1" per cluster.
std::string cluster_centroid_table_csv(const ZoneMap& zones);
// "pc1,pc2,zone" per clustered row, for external plotting.
std::string cluster_plot_data_csv(const ClusterModel& model, const PcaModel& pca_model,
                                  const ZoneMap& zones);
nlohmann::json cluster_to_json(const ClusterModel& model, const PcaModel& pca_model,
                               const ZoneMap& zones, const FeatureMatrix& matrix,
                               const std::vector<IncidentRecord>& records);

void write_text_file(const std::string& path, const std::string& content);

struct PipelineOptions {
  std::string out_dir;
  std::uint64_t synth_seed = 42;
  std::size_t n = 2999;
  std::uint64_t cluster_seed = 7;
  bool enforcing = true;
};

struct PipelineSummary {
  std::size_t generated = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  double two_pc_explained_variance_ratio = 0.0;
  std::vector<std::string> artifacts; // file names inside out_dir
};

// Runs the full desk-scale pipeline into out_dir: a fresh journal
// (incidents.jsonl must not already hold entries), ANOVA term tables for
// both responses, and the k=5 cluster artifacts. Returns the summary that is
// also written as pipeline_summary.json.
PipelineSummary run_desk_pipeline(const PipelineOptions& options);

} // namespace aiir
