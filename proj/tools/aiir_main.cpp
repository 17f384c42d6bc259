// aiir — operator CLI for the incident database: validation, redaction,
// significance assessment, synthetic data, ingestion, export, analytics,
// report generation, and the HTTP service.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "aiir/config.hpp"
#include "aiir/csv.hpp"
#include "aiir/json_io.hpp"
#include "aiir/reports.hpp"
#include "aiir/service.hpp"
#include "aiir/significance.hpp"
#include "aiir/store.hpp"
#include "aiir/synth.hpp"
#include "aiir/text.hpp"

namespace {

using namespace aiir;

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw std::runtime_error("cannot open file: " + path);
  }
  nlohmann::json j;
  in >> j;
  return j;
}

std::vector<IncidentRecord> read_records_file(const std::string& path,
                                              const RegionDomain& regions) {
  const std::string extension = std::filesystem::path(path).extension().string();
  if (extension == ".json") {
    const auto j = read_json_file(path);
    std::vector<IncidentRecord> records;
    if (j.is_array()) {
      for (const auto& item : j) records.push_back(record_from_json(item, regions));
    } else {
      records.push_back(record_from_json(j, regions));
    }
    return records;
  }
  if (extension == ".jsonl") {
    std::ifstream in(path);
    if (!in.is_open()) {
      throw std::runtime_error("cannot open file: " + path);
    }
    std::vector<IncidentRecord> records;
    std::string line;
    while (std::getline(in, line)) {
      if (trim(line).empty()) continue;
      records.push_back(record_from_json(nlohmann::json::parse(line), regions));
    }
    return records;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) {
    throw std::runtime_error("cannot open file: " + path);
  }
  return read_csv(in, regions);
}

int run_validate(const Config& config, const std::string& path, bool lenient) {
  const RegionDomain regions = regions_from_config(config);
  std::vector<IncidentRecord> records;
  try {
    records = read_records_file(path, regions);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  const ValidationMode mode = lenient ? ValidationMode::Lenient : ValidationMode::Strict;
  std::size_t bad = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const ValidationReport report = validate_record(records[i], mode, regions);
    if (!report.ok) {
      ++bad;
      for (const auto& v : report.violations) {
        std::cerr << "row " << (i + 1) << " [" << v.field << "] " << v.message << "\n";
      }
    }
  }
  std::cout << records.size() << " records, " << (records.size() - bad) << " valid, " << bad
            << " invalid\n";
  return bad == 0 ? 0 : 1;
}

int run_redact(const Config& config, const std::string& input_path,
               const std::string& policy_path, const std::string& out_path) {
  RedactionPolicy policy = config.redaction;
  if (!policy_path.empty()) {
    policy = redaction_policy_from_json(read_json_file(policy_path));
  }
  const auto input = read_json_file(input_path);
  nlohmann::json output;
  auto redact_one = [&policy](const nlohmann::json& item) {
    const InternalReport report = internal_report_from_json(item);
    const IncidentRecord record = redact(report, policy);
    // Defense in depth: scan the emitted serialization before handing it out.
    const auto findings = leakage_scan(record_to_json(record).dump(), policy);
    if (!findings.empty()) {
      throw std::runtime_error("leakage scan flagged the redacted record: " +
                               findings_to_json(findings).dump());
    }
    return record_to_json(record);
  };
  try {
    if (input.is_array()) {
      output = nlohmann::json::array();
      for (const auto& item : input) output.push_back(redact_one(item));
    } else {
      output = redact_one(input);
    }
  } catch (const RedactionError& e) {
    std::cerr << "redaction error: " << e.what() << "\n"
              << validation_report_to_json(e.report()).dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  const std::string serialized = output.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << serialized;
  } else {
    write_text_file(out_path, serialized);
  }
  return 0;
}

int run_assess(const Config& config, const std::string& path) {
  const RegionDomain regions = regions_from_config(config);
  std::vector<IncidentRecord> records;
  try {
    records = read_records_file(path, regions);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  const std::vector<double> edges =
      config.redaction.bucket_edges.empty() ? std::vector<double>{0, 100, 200}
                                            : config.redaction.bucket_edges;
  std::cout << "row,significant,price_trigger,volume_trigger\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const SignificanceVerdict v = assess_record(records[i], config.significance, edges);
    std::cout << (i + 1) << "," << yes_no(v.significant) << "," << yes_no(v.price_trigger) << ","
              << yes_no(v.volume_trigger) << "\n";
  }
  return 0;
}

int run_synth(const Config& config, const SynthConfig& synth_config,
              const std::string& seeds_path, const std::string& out_path,
              const std::string& format) {
  const RegionDomain regions = regions_from_config(config);
  std::vector<IncidentRecord> generated;
  try {
    if (seeds_path.empty()) {
      generated = synthesize(SeedSet::builtin(), synth_config, regions);
    } else {
      generated = synthesize(SeedSet(read_records_file(seeds_path, regions)), synth_config, regions);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  const bool jsonl = format == "jsonl" ||
                     (format.empty() &&
                      std::filesystem::path(out_path).extension().string() == ".jsonl");
  std::string content;
  if (jsonl) {
    for (const auto& r : generated) content += record_to_json(r).dump() + "\n";
  } else {
    std::ostringstream out;
    write_csv(out, generated);
    content = out.str();
  }
  try {
    write_text_file(out_path, content);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cout << "wrote " << generated.size() << " records to " << out_path << "\n";
  return 0;
}

int run_ingest(const Config& config, const std::string& csv_path, const std::string& store_path,
               bool advisory) {
  Store::Options options = store_options_from_config(config);
  if (!store_path.empty()) options.path = store_path;
  if (advisory) options.enforcing = false;
  try {
    Store store(options);
    const IngestReport report = store.import_csv(csv_path);
    for (const auto& row : report.rows) {
      if (row.status != AppendStatus::Accepted) {
        std::cerr << "row " << row.row << " rejected (" << to_token(row.status) << ")"
                  << (row.message.empty() ? "" : ": " + row.message) << "\n";
      }
    }
    std::cout << report.accepted << " accepted, " << report.rejected << " rejected, store now "
              << store.size() << " records\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_export(const Config& config, const std::string& store_path, const std::string& out_path,
               const std::vector<std::string>& equals, const std::vector<std::string>& mins,
               const std::vector<std::string>& maxes, std::size_t limit, std::size_t offset) {
  Store::Options options = store_options_from_config(config);
  if (!store_path.empty()) options.path = store_path;
  QueryFilter filter;
  filter.limit = limit;
  filter.offset = offset;
  auto split_pair = [](const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::runtime_error("filter must be field=value, got '" + text + "'");
    }
    return std::make_pair(text.substr(0, eq), text.substr(eq + 1));
  };
  try {
    for (const auto& text : equals) {
      const auto [key, value] = split_pair(text);
      filter.equals[key] = value;
    }
    for (const auto& text : mins) {
      const auto [key, value] = split_pair(text);
      const auto v = parse_double(value);
      if (!v) throw std::runtime_error("range bound must be numeric: " + text);
      filter.ranges[key].min = *v;
    }
    for (const auto& text : maxes) {
      const auto [key, value] = split_pair(text);
      const auto v = parse_double(value);
      if (!v) throw std::runtime_error("range bound must be numeric: " + text);
      filter.ranges[key].max = *v;
    }
    Store store(options);
    const std::size_t rows = store.export_csv(filter, out_path);
    std::cout << "exported " << rows << " rows to " << out_path << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_anova(const Config& config, const std::string& store_path, const std::string& response,
              bool interaction, const std::string& csv_out, const std::string& json_out) {
  Store::Options options = store_options_from_config(config);
  if (!store_path.empty()) options.path = store_path;
  try {
    AnovaSpec spec;
    spec.response = parse_anova_response(response);
    spec.include_interaction = interaction;
    Store store(options);
    const AnovaResult result = two_way_anova(store.records(), spec);
    const std::string table = anova_term_table_csv(result);
    std::cout << table;
    std::cout << "n=" << result.n << " r_squared=" << format_double(result.model_r_squared)
              << (result.degenerate ? " (degenerate: zero residual)" : "") << "\n";
    if (!csv_out.empty()) write_text_file(csv_out, table);
    if (!json_out.empty()) write_text_file(json_out, anova_to_json(result, spec).dump(2) + "\n");
    return 0;
  } catch (const DegenerateDesignError& e) {
    std::cerr << "degenerate design: " << e.what() << "\n";
    for (const auto& cell : e.empty_cells()) std::cerr << "  empty cell: " << cell << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_cluster(const Config& config, const std::string& store_path, std::size_t k,
                std::uint64_t seed, const std::string& out_dir) {
  if (k != 5) {
    std::cerr << "error: zone taxonomy requires k = 5 (got " << k << ")\n";
    return 1;
  }
  Store::Options options = store_options_from_config(config);
  if (!store_path.empty()) options.path = store_path;
  try {
    Store store(options);
    const auto records = store.records();
    const FeatureMatrix matrix = standardize(records);
    const ClusterModel model = kmeans(matrix, k, seed);
    const PcaModel pca_model = pca(matrix);
    const ZoneMap zones = label_zones(model, pca_model, matrix, records);

    std::cout << "cluster,zone,size\n";
    for (std::size_t c = 0; c < zones.labels.size(); ++c) {
      std::cout << c << "," << zones.labels[c] << "," << zones.evidence[c].size << "\n";
    }
    std::cout << "two_pc_explained_variance_ratio="
              << format_double(pca_model.explained_variance_ratios[0] +
                               pca_model.explained_variance_ratios[1])
              << " inertia=" << format_double(model.inertia) << "\n";

    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      const auto in_dir = [&out_dir](const std::string& name) {
        return (std::filesystem::path(out_dir) / name).string();
      };
      write_text_file(in_dir("cluster_assignments.csv"),
                      cluster_assignments_csv(model, pca_model, zones, matrix, records));
      write_text_file(in_dir("cluster_centroids.csv"), cluster_centroid_table_csv(zones));
      write_text_file(in_dir("cluster_plot_data.csv"),
                      cluster_plot_data_csv(model, pca_model, zones));
      write_text_file(in_dir("cluster_summary.json"),
                      cluster_to_json(model, pca_model, zones, matrix, records).dump(2) + "\n");
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_report(const Config& config, const std::string& store_path, const std::string& out_dir,
               bool with_synth, std::uint64_t synth_seed, std::size_t n,
               std::uint64_t cluster_seed) {
  try {
    if (with_synth) {
      PipelineOptions options;
      options.out_dir = out_dir;
      options.synth_seed = synth_seed;
      options.n = n;
      options.cluster_seed = cluster_seed;
      const PipelineSummary summary = run_desk_pipeline(options);
      std::cout << "generated=" << summary.generated << " accepted=" << summary.accepted
                << " rejected=" << summary.rejected << " two_pc_ratio="
                << format_double(summary.two_pc_explained_variance_ratio) << "\n";
      for (const auto& name : summary.artifacts) std::cout << "wrote " << name << "\n";
      return 0;
    }

    Store::Options options = store_options_from_config(config);
    if (!store_path.empty()) options.path = store_path;
    Store store(options);
    const auto records = store.records();
    std::filesystem::create_directories(out_dir);
    const auto in_dir = [&out_dir](const std::string& name) {
      return (std::filesystem::path(out_dir) / name).string();
    };
    for (const AnovaResponse response :
         {AnovaResponse::AiBuyVolumePct, AnovaResponse::AiSellVolumePct}) {
      AnovaSpec spec;
      spec.response = response;
      const AnovaResult result = two_way_anova(records, spec);
      const std::string stem = "anova_" + std::string(to_token(response));
      write_text_file(in_dir(stem + ".csv"), anova_term_table_csv(result));
      write_text_file(in_dir(stem + ".json"), anova_to_json(result, spec).dump(2) + "\n");
      std::cout << "wrote " << stem << ".csv, " << stem << ".json\n";
    }
    const FeatureMatrix matrix = standardize(records);
    const ClusterModel model = kmeans(matrix, 5, cluster_seed);
    const PcaModel pca_model = pca(matrix);
    const ZoneMap zones = label_zones(model, pca_model, matrix, records);
    write_text_file(in_dir("cluster_assignments.csv"),
                    cluster_assignments_csv(model, pca_model, zones, matrix, records));
    write_text_file(in_dir("cluster_centroids.csv"), cluster_centroid_table_csv(zones));
    write_text_file(in_dir("cluster_plot_data.csv"),
                    cluster_plot_data_csv(model, pca_model, zones));
    write_text_file(in_dir("cluster_summary.json"),
                    cluster_to_json(model, pca_model, zones, matrix, records).dump(2) + "\n");
    std::cout << "wrote cluster_assignments.csv, cluster_centroids.csv, cluster_plot_data.csv, "
                 "cluster_summary.json\n";
    return 0;
  } catch (const DegenerateDesignError& e) {
    std::cerr << "degenerate design: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_serve(const Config& config, const std::string& store_path, const std::string& host,
              int port) {
  Store::Options options = store_options_from_config(config);
  if (!store_path.empty()) options.path = store_path;
  try {
    Store store(options);
    Service service(store);
    std::cout << "serving " << store.size() << " records on " << host << ":" << port << "\n";
    if (!service.listen(host, port)) {
      std::cerr << "error: cannot bind " << host << ":" << port << "\n";
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"AI trading incident database toolkit"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "config file (default: $AIIR_CONFIG if set)");

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "validate records in a CSV/JSON file");
  std::string validate_file;
  bool validate_lenient = false;
  validate_cmd->add_option("file", validate_file, "input file")->required();
  validate_cmd->add_flag("--lenient", validate_lenient, "skip the AI<=Total ordering rule");

  // redact
  auto* redact_cmd = app.add_subcommand("redact", "turn internal reports into public records");
  std::string redact_file, redact_policy, redact_out;
  redact_cmd->add_option("file", redact_file, "internal report JSON (object or array)")->required();
  redact_cmd->add_option("--policy", redact_policy, "redaction policy JSON file");
  redact_cmd->add_option("--out", redact_out, "output path (default: stdout)");

  // assess
  auto* assess_cmd = app.add_subcommand("assess", "run the significance gate over a file");
  std::string assess_file;
  assess_cmd->add_option("file", assess_file, "input file")->required();

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "generate deterministic synthetic records");
  SynthConfig synth_config;
  std::string synth_out, synth_seeds, synth_format;
  bool synth_round_robin = false;
  std::vector<std::string> synth_injections;
  synth_cmd->add_option("--seed", synth_config.seed, "PRNG seed")->required();
  synth_cmd->add_option("--n", synth_config.n, "record count")->capture_default_str();
  synth_cmd->add_option("--out", synth_out, "output file (.csv or .jsonl)")->required();
  synth_cmd->add_option("--jitter-sigma", synth_config.jitter_sigma, "numeric noise stddev")
      ->capture_default_str();
  synth_cmd->add_option("--mutation-rate", synth_config.categorical_mutation_rate,
                        "categorical mutation probability")
      ->capture_default_str();
  synth_cmd->add_flag("--region-neutral", synth_config.region_neutral,
                      "resample region independently of all other fields");
  synth_cmd->add_flag("--round-robin", synth_round_robin, "cycle seeds instead of sampling");
  synth_cmd->add_option("--seeds", synth_seeds, "seed records file (default: built-in sample)");
  synth_cmd->add_option("--inject", synth_injections,
                        "effect injection LEVEL=ai_buy_shift[,ai_sell_shift]");
  synth_cmd->add_option("--format", synth_format, "csv or jsonl (default: by extension)");

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "import a CSV file into the store");
  std::string ingest_file, ingest_store;
  bool ingest_advisory = false;
  ingest_cmd->add_option("file", ingest_file, "CSV file")->required();
  ingest_cmd->add_option("--store", ingest_store, "journal path (default: config store_path)");
  ingest_cmd->add_flag("--advisory", ingest_advisory,
                       "log insignificant records instead of rejecting them");

  // export
  auto* export_cmd = app.add_subcommand("export", "export store records as CSV");
  std::string export_store, export_out;
  std::vector<std::string> export_eq, export_min, export_max;
  std::size_t export_limit = SIZE_MAX, export_offset = 0;
  export_cmd->add_option("--store", export_store, "journal path");
  export_cmd->add_option("--out", export_out, "output CSV path")->required();
  export_cmd->add_option("--eq", export_eq, "equality filter field=value (repeatable)");
  export_cmd->add_option("--min", export_min, "lower bound field=value (repeatable)");
  export_cmd->add_option("--max", export_max, "upper bound field=value (repeatable)");
  export_cmd->add_option("--limit", export_limit, "max rows");
  export_cmd->add_option("--offset", export_offset, "rows to skip");

  // anova
  auto* anova_cmd = app.add_subcommand("anova", "two-way ANOVA over the store");
  std::string anova_store, anova_response = "ai_buy_volume_pct", anova_csv, anova_json;
  bool anova_interaction = false;
  anova_cmd->add_option("--store", anova_store, "journal path");
  anova_cmd->add_option("--response", anova_response, "ai_buy_volume_pct or ai_sell_volume_pct")
      ->capture_default_str();
  anova_cmd->add_flag("--interaction", anova_interaction, "include the interaction term");
  anova_cmd->add_option("--csv", anova_csv, "write the term table CSV here");
  anova_cmd->add_option("--json", anova_json, "write the JSON summary here");

  // cluster
  auto* cluster_cmd = app.add_subcommand("cluster", "k-means + zone labeling over the store");
  std::string cluster_store, cluster_out_dir;
  std::size_t cluster_k = 5;
  std::uint64_t cluster_seed = 7;
  cluster_cmd->add_option("--store", cluster_store, "journal path");
  cluster_cmd->add_option("--k", cluster_k, "cluster count (must be 5)")->capture_default_str();
  cluster_cmd->add_option("--seed", cluster_seed, "PRNG seed")->capture_default_str();
  cluster_cmd->add_option("--out-dir", cluster_out_dir, "write artifact files here");

  // report
  auto* report_cmd = app.add_subcommand("report", "emit term tables, centroid tables, plot data");
  std::string report_store, report_out_dir;
  std::uint64_t report_synth_seed = 42, report_cluster_seed = 7;
  std::size_t report_n = 2999;
  bool report_with_synth = false;
  report_cmd->add_option("--store", report_store, "journal path (existing store)");
  report_cmd->add_option("--out-dir", report_out_dir, "output directory")->required();
  report_cmd->add_flag("--synth", report_with_synth,
                       "run the full pipeline (synthesize + ingest into a fresh store first)");
  report_cmd->add_option("--synth-seed", report_synth_seed, "pipeline synthesis seed")
      ->capture_default_str();
  report_cmd->add_option("--n", report_n, "pipeline record count")->capture_default_str();
  report_cmd->add_option("--cluster-seed", report_cluster_seed, "clustering seed")
      ->capture_default_str();

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP service");
  std::string serve_store, serve_host;
  int serve_port = 0;
  serve_cmd->add_option("--store", serve_store, "journal path");
  serve_cmd->add_option("--host", serve_host, "bind host (default: config)");
  serve_cmd->add_option("--port", serve_port, "bind port (default: config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    std::cerr << app.help() << "\n";
    return 2;
  }

  Config config;
  try {
    config = load_config_or_default(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  if (*validate_cmd) return run_validate(config, validate_file, validate_lenient);
  if (*redact_cmd) return run_redact(config, redact_file, redact_policy, redact_out);
  if (*assess_cmd) return run_assess(config, assess_file);
  if (*synth_cmd) {
    if (synth_round_robin) synth_config.seed_selection = SeedSelection::RoundRobin;
    for (const auto& text : synth_injections) {
      const auto eq = text.find('=');
      if (eq == std::string::npos || eq == 0) {
        std::cerr << "error: --inject expects LEVEL=ai_buy_shift[,ai_sell_shift]\n";
        return 1;
      }
      InjectionShift shift;
      const std::string values = text.substr(eq + 1);
      const auto comma = values.find(',');
      const auto buy = parse_double(comma == std::string::npos ? values : values.substr(0, comma));
      if (!buy) {
        std::cerr << "error: --inject shift must be numeric, got '" << text << "'\n";
        return 1;
      }
      shift.ai_buy = *buy;
      if (comma != std::string::npos) {
        const auto sell = parse_double(values.substr(comma + 1));
        if (!sell) {
          std::cerr << "error: --inject shift must be numeric, got '" << text << "'\n";
          return 1;
        }
        shift.ai_sell = *sell;
      }
      synth_config.effect_injection[normalize_token(text.substr(0, eq))] = shift;
    }
    return run_synth(config, synth_config, synth_seeds, synth_out, synth_format);
  }
  if (*ingest_cmd) return run_ingest(config, ingest_file, ingest_store, ingest_advisory);
  if (*export_cmd) {
    return run_export(config, export_store, export_out, export_eq, export_min, export_max,
                      export_limit, export_offset);
  }
  if (*anova_cmd) {
    return run_anova(config, anova_store, anova_response, anova_interaction, anova_csv, anova_json);
  }
  if (*cluster_cmd) return run_cluster(config, cluster_store, cluster_k, cluster_seed,
                                       cluster_out_dir);
  if (*report_cmd) {
    return run_report(config, report_store, report_out_dir, report_with_synth, report_synth_seed,
                      report_n, report_cluster_seed);
  }
  if (*serve_cmd) {
    return run_serve(config, serve_store, serve_host.empty() ? config.host : serve_host,
                     serve_port == 0 ? config.port : serve_port);
  }
  return 2;
}
