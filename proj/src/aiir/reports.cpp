#include "aiir/reports.hpp"

#include <filesystem>
#include <fstream>

#include "aiir/store.hpp"
#include "aiir/synth.hpp"
#include "aiir/text.hpp"

namespace aiir {

std::string anova_term_table_csv(const AnovaResult& result) {
  std::string out = "term,ss,df,f_stat,p_value,partial_eta_sq\n";
  for (const auto& term : result.terms) {
    out += term.name + "," + format_double(term.ss) + "," + std::to_string(term.df) + "," +
           format_double(term.f_stat) + "," + format_double(term.p_value) + "," +
           format_double(term.partial_eta_sq) + "\n";
  }
  out += "residual," + format_double(result.ss_residual) + "," +
         std::to_string(result.df_residual) + ",,,\n";
  return out;
}

nlohmann::json anova_to_json(const AnovaResult& result, const AnovaSpec& spec) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["response"] = std::string(to_token(spec.response));
  j["include_interaction"] = spec.include_interaction;
  j["n"] = result.n;
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& term : result.terms) {
    terms.push_back({{"term", term.name},
                     {"ss", term.ss},
                     {"df", term.df},
                     {"f_stat", term.f_stat},
                     {"p_value", term.p_value},
                     {"partial_eta_sq", term.partial_eta_sq}});
  }
  j["terms"] = terms;
  j["ss_residual"] = result.ss_residual;
  j["df_residual"] = result.df_residual;
  j["ss_total"] = result.ss_total;
  j["model_r_squared"] = result.model_r_squared;
  j["degenerate"] = result.degenerate;
  j["levels_ai_system_category"] = result.levels_a;
  j["levels_market_region"] = result.levels_b;
  j["empty_cells"] = result.empty_cells;
  return j;
}

std::string cluster_assignments_csv(const ClusterModel& model, const PcaModel& pca_model,
                                    const ZoneMap& zones, const FeatureMatrix& matrix,
                                    const std::vector<IncidentRecord>& records) {
  std::string out = "serial_no,cluster,zone,pc1,pc2\n";
  for (std::size_t i = 0; i < model.assignments.size(); ++i) {
    const std::size_t c = model.assignments[i];
    out += std::to_string(records[matrix.record_indices[i]].serial_no) + "," +
           std::to_string(c) + "," + zones.labels[c] + "," +
           format_double(pca_model.projection.at(i, 0)) + "," +
           format_double(pca_model.projection.at(i, 1)) + "\n";
  }
  return out;
}

std::string cluster_centroid_table_csv(const ZoneMap& zones) {
  std::string out = "cluster,zone,size";
  for (const auto& column : feature_columns()) out += "," + column;
  out += ",mean_ai_share,dispersion,centroid_pc1\n";
  for (std::size_t c = 0; c < zones.labels.size(); ++c) {
    const ZoneEvidence& e = zones.evidence[c];
    out += std::to_string(c) + "," + zones.labels[c] + "," + std::to_string(e.size);
    for (const double v : e.centroid_original) out += "," + format_double(v);
    out += "," + format_double(e.mean_ai_share) + "," + format_double(e.dispersion) + "," +
           format_double(e.centroid_pc1) + "\n";
  }
  return out;
}

std::string cluster_plot_data_csv(const ClusterModel& model, const PcaModel& pca_model,
                                  const ZoneMap& zones) {
  std::string out = "pc1,pc2,zone\n";
  for (std::size_t i = 0; i < model.assignments.size(); ++i) {
    out += format_double(pca_model.projection.at(i, 0)) + "," +
           format_double(pca_model.projection.at(i, 1)) + "," +
           zones.labels[model.assignments[i]] + "\n";
  }
  return out;
}

nlohmann::json cluster_to_json(const ClusterModel& model, const PcaModel& pca_model,
                               const ZoneMap& zones, const FeatureMatrix& matrix,
                               const std::vector<IncidentRecord>& records) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["k"] = model.k;
  j["seed"] = model.seed;
  j["inertia"] = model.inertia;
  j["iterations"] = model.iterations;
  j["rows_clustered"] = model.assignments.size();
  j["zone_taxonomy_version"] = zones.version;
  j["degenerate"] = zones.degenerate;
  j["explained_variance_ratios"] = pca_model.explained_variance_ratios;
  j["two_pc_explained_variance_ratio"] =
      pca_model.explained_variance_ratios.size() >= 2
          ? pca_model.explained_variance_ratios[0] + pca_model.explained_variance_ratios[1]
          : (pca_model.explained_variance_ratios.empty() ? 0.0
                                                         : pca_model.explained_variance_ratios[0]);

  nlohmann::json clusters = nlohmann::json::array();
  for (std::size_t c = 0; c < zones.labels.size(); ++c) {
    const ZoneEvidence& e = zones.evidence[c];
    nlohmann::json centroid;
    const auto& columns = feature_columns();
    for (std::size_t f = 0; f < columns.size(); ++f) {
      centroid[columns[f]] = e.centroid_original[f];
    }
    clusters.push_back({{"cluster", c},
                        {"zone", zones.labels[c]},
                        {"size", e.size},
                        {"centroid", centroid},
                        {"mean_ai_share", e.mean_ai_share},
                        {"dispersion", e.dispersion},
                        {"centroid_pc1", e.centroid_pc1}});
  }
  j["clusters"] = clusters;

  nlohmann::json assignments = nlohmann::json::array();
  for (std::size_t i = 0; i < model.assignments.size(); ++i) {
    assignments.push_back({{"serial_no", records[matrix.record_indices[i]].serial_no},
                           {"cluster", model.assignments[i]},
                           {"zone", zones.labels[model.assignments[i]]}});
  }
  j["assignments"] = assignments;
  return j;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.is_open()) {
    throw std::runtime_error("cannot open file for writing: " + path);
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out.good()) {
    throw std::runtime_error("write failed: " + path);
  }
}

PipelineSummary run_desk_pipeline(const PipelineOptions& options) {
  namespace fs = std::filesystem;
  if (options.out_dir.empty()) {
    throw std::invalid_argument("pipeline requires an output directory");
  }
  fs::create_directories(options.out_dir);
  const std::string journal = (fs::path(options.out_dir) / "incidents.jsonl").string();
  if (fs::exists(journal) && fs::file_size(journal) > 0) {
    throw std::runtime_error("pipeline requires a fresh journal, found existing entries: " +
                             journal);
  }

  SynthConfig synth_config;
  synth_config.seed = options.synth_seed;
  synth_config.n = options.n;
  const auto generated = synthesize(SeedSet::builtin(), synth_config);

  Store::Options store_options;
  store_options.path = journal;
  store_options.enforcing = options.enforcing;
  Store store(store_options);

  PipelineSummary summary;
  summary.generated = generated.size();
  for (const auto& record : generated) {
    const AppendResult result = store.append(record, "synth");
    if (result.status == AppendStatus::Accepted) {
      ++summary.accepted;
    } else {
      ++summary.rejected;
    }
  }

  const auto records = store.records();
  auto emit = [&](const std::string& name, const std::string& content) {
    write_text_file((fs::path(options.out_dir) / name).string(), content);
    summary.artifacts.push_back(name);
  };

  for (const AnovaResponse response :
       {AnovaResponse::AiBuyVolumePct, AnovaResponse::AiSellVolumePct}) {
    AnovaSpec spec;
    spec.response = response;
    const AnovaResult result = two_way_anova(records, spec);
    const std::string stem = "anova_" + std::string(to_token(response));
    emit(stem + ".csv", anova_term_table_csv(result));
    emit(stem + ".json", anova_to_json(result, spec).dump(2) + "\n");
  }

  const FeatureMatrix matrix = standardize(records);
  const ClusterModel model = kmeans(matrix, 5, options.cluster_seed);
  const PcaModel pca_model = pca(matrix);
  const ZoneMap zones = label_zones(model, pca_model, matrix, records);
  emit("cluster_assignments.csv",
       cluster_assignments_csv(model, pca_model, zones, matrix, records));
  emit("cluster_centroids.csv", cluster_centroid_table_csv(zones));
  emit("cluster_plot_data.csv", cluster_plot_data_csv(model, pca_model, zones));
  emit("cluster_summary.json",
       cluster_to_json(model, pca_model, zones, matrix, records).dump(2) + "\n");

  summary.two_pc_explained_variance_ratio = pca_model.explained_variance_ratios[0] +
                                            pca_model.explained_variance_ratios[1];

  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["synth_seed"] = options.synth_seed;
  j["cluster_seed"] = options.cluster_seed;
  j["generated"] = summary.generated;
  j["accepted"] = summary.accepted;
  j["rejected"] = summary.rejected;
  j["two_pc_explained_variance_ratio"] = summary.two_pc_explained_variance_ratio;
  j["artifacts"] = summary.artifacts;
  emit("pipeline_summary.json", j.dump(2) + "\n");
  return summary;
}

} // namespace aiir
