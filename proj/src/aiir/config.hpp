#pragma once

// Deployment configuration, loaded from a JSON file. The only environment
// variable the artifact reads is AIIR_CONFIG, which overrides the config
// file path; everything else lives in the file itself.

#include <string>
#include <vector>

#include "aiir/confidentiality.hpp"
#include "aiir/significance.hpp"
#include "aiir/store.hpp"

namespace aiir {

struct Config {
  std::string store_path = "incidents.jsonl";
  SignificancePolicy significance;
  bool enforcing = true;
  RedactionPolicy redaction;
  std::vector<std::string> extra_regions; // registered on top of APAC/EMEA/AMER
  std::string host = "127.0.0.1";
  int port = 8080;
};

// Keys: store_path, significance{price_deviation_threshold_pct,
// volume_anomaly_threshold_pct}, enforcing, redaction{bucket_edges,
// strict_mode, denylist, rounding}, extra_regions, host, port. Missing keys
// keep their defaults. Throws on unreadable files or malformed values.
Config load_config(const std::string& path);

// `explicit_path` when non-empty, else $AIIR_CONFIG, else empty (defaults).
std::string resolve_config_path(const std::string& explicit_path);

// Loads the resolved path, or returns defaults when no path resolves.
Config load_config_or_default(const std::string& explicit_path);

RegionDomain regions_from_config(const Config& config);
Store::Options store_options_from_config(const Config& config);

} // namespace aiir
