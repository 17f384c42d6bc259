#include "aiir/config.hpp"

#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "aiir/json_io.hpp"

namespace aiir {

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed config file " + path + ": " + e.what());
  }

  Config config;
  if (const auto it = j.find("store_path"); it != j.end()) {
    config.store_path = it->get<std::string>();
  }
  if (const auto it = j.find("significance"); it != j.end()) {
    config.significance = significance_policy_from_json(*it);
  }
  if (const auto it = j.find("enforcing"); it != j.end()) {
    config.enforcing = it->get<bool>();
  }
  if (const auto it = j.find("redaction"); it != j.end()) {
    config.redaction = redaction_policy_from_json(*it);
  }
  if (const auto it = j.find("extra_regions"); it != j.end()) {
    for (const auto& region : *it) {
      config.extra_regions.push_back(region.get<std::string>());
    }
  }
  if (const auto it = j.find("host"); it != j.end()) {
    config.host = it->get<std::string>();
  }
  if (const auto it = j.find("port"); it != j.end()) {
    config.port = it->get<int>();
  }
  return config;
}

std::string resolve_config_path(const std::string& explicit_path) {
  if (!explicit_path.empty()) return explicit_path;
  if (const char* env = std::getenv("AIIR_CONFIG"); env != nullptr && *env != '\0') {
    return env;
  }
  return "";
}

Config load_config_or_default(const std::string& explicit_path) {
  const std::string path = resolve_config_path(explicit_path);
  if (path.empty()) return Config{};
  return load_config(path);
}

RegionDomain regions_from_config(const Config& config) {
  RegionDomain regions; // starts from the builtin set
  for (const auto& region : config.extra_regions) {
    regions.add(region);
  }
  return regions;
}

Store::Options store_options_from_config(const Config& config) {
  Store::Options options;
  options.path = config.store_path;
  options.significance = config.significance;
  options.enforcing = config.enforcing;
  if (!config.redaction.bucket_edges.empty()) {
    options.bucket_edges = config.redaction.bucket_edges;
  }
  options.regions = regions_from_config(config);
  return options;
}

} // namespace aiir
