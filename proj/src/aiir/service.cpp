#include "aiir/service.hpp"

#include <httplib.h>
#include <json.hpp>

#include "aiir/json_io.hpp"
#include "aiir/reports.hpp"
#include "aiir/text.hpp"

namespace aiir {

namespace {

using nlohmann::json;

void send_json(httplib::Response& res, int status, json body) {
  body["schema_version"] = kSchemaVersion;
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code,
                const std::string& message, json extra = json::object()) {
  json body;
  extra["code"] = code;
  extra["message"] = message;
  body["error"] = std::move(extra);
  send_json(res, status, std::move(body));
}

// Maps an append outcome onto a response; shared by the single and batch
// submission endpoints.
json append_result_to_json(const AppendResult& result) {
  json j;
  j["status"] = std::string(to_token(result.status));
  switch (result.status) {
    case AppendStatus::Accepted:
      j["serial_no"] = result.serial_no;
      break;
    case AppendStatus::Invalid:
      j["violations"] = validation_report_to_json(result.validation)["violations"];
      break;
    case AppendStatus::Duplicate:
      j["duplicate_of"] = result.serial_no;
      break;
    case AppendStatus::Insignificant:
      j["significance"] = {{"significant", result.verdict.significant},
                           {"price_trigger", result.verdict.price_trigger},
                           {"volume_trigger", result.verdict.volume_trigger}};
      break;
  }
  return j;
}

int append_status_code(AppendStatus status) {
  switch (status) {
    case AppendStatus::Accepted: return 201;
    case AppendStatus::Invalid: return 400;
    case AppendStatus::Duplicate: return 409;
    case AppendStatus::Insignificant: return 422;
  }
  return 500;
}

const char* append_error_code(AppendStatus status) {
  switch (status) {
    case AppendStatus::Invalid: return "validation";
    case AppendStatus::Duplicate: return "duplicate";
    case AppendStatus::Insignificant: return "insignificant";
    default: return "internal";
  }
}

// Builds a QueryFilter from request parameters: bare column names are
// equality filters, <column>_min/<column>_max bound numeric ranges.
QueryFilter filter_from_params(const httplib::Request& req) {
  QueryFilter filter;
  for (const auto& [key, value] : req.params) {
    if (key == "limit") {
      filter.limit = static_cast<std::size_t>(std::stoull(value));
      continue;
    }
    if (key == "offset") {
      filter.offset = static_cast<std::size_t>(std::stoull(value));
      continue;
    }
    auto parse_bound = [&value, &key]() {
      const auto v = parse_double(value);
      if (!v) {
        throw ParseError(key, value, "range bound " + key + " must be numeric");
      }
      return *v;
    };
    if (key.size() > 4 && key.rfind("_min") == key.size() - 4) {
      filter.ranges[key.substr(0, key.size() - 4)].min = parse_bound();
    } else if (key.size() > 4 && key.rfind("_max") == key.size() - 4) {
      filter.ranges[key.substr(0, key.size() - 4)].max = parse_bound();
    } else {
      filter.equals[key] = value;
    }
  }
  return filter;
}

} // namespace

Service::Service(Store& store) : store_(store), server_(new httplib::Server()) {
  register_routes();
}

Service::~Service() = default;

bool Service::listen(const std::string& host, int port) {
  return server_->listen(host, port);
}

int Service::bind_any_port(const std::string& host) {
  return server_->bind_to_any_port(host);
}

bool Service::serve_after_bind() { return server_->listen_after_bind(); }

void Service::stop() { server_->stop(); }

void Service::register_routes() {
  server_->Get("/v1/health", [this](const httplib::Request&, httplib::Response& res) {
    json body;
    body["status"] = "ok";
    body["records"] = store_.size();
    send_json(res, 200, std::move(body));
  });

  server_->Post("/v1/incidents", [this](const httplib::Request& req, httplib::Response& res) {
    json parsed = json::parse(req.body, nullptr, false);
    if (parsed.is_discarded()) {
      send_error(res, 400, "validation", "request body is not valid JSON");
      return;
    }
    IncidentRecord record;
    try {
      record = record_from_json(parsed, store_.options().regions);
    } catch (const ParseError& e) {
      send_error(res, 400, "validation", e.what(), {{"field", e.field()}});
      return;
    }
    const AppendResult result = store_.append(record, "api");
    json body = append_result_to_json(result);
    if (result.status == AppendStatus::Accepted) {
      send_json(res, 201, std::move(body));
    } else {
      send_error(res, append_status_code(result.status), append_error_code(result.status),
                 "record not accepted", std::move(body));
    }
  });

  server_->Post("/v1/incidents:batch", [this](const httplib::Request& req,
                                              httplib::Response& res) {
    json parsed = json::parse(req.body, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object() || !parsed.contains("records") ||
        !parsed["records"].is_array()) {
      send_error(res, 400, "validation", "body must be {\"records\": [...]}");
      return;
    }
    json results = json::array();
    std::size_t accepted = 0;
    for (const auto& item : parsed["records"]) {
      try {
        const IncidentRecord record = record_from_json(item, store_.options().regions);
        const AppendResult result = store_.append(record, "api");
        if (result.status == AppendStatus::Accepted) ++accepted;
        results.push_back(append_result_to_json(result));
      } catch (const ParseError& e) {
        results.push_back({{"status", "invalid"}, {"message", e.what()}});
      }
    }
    json body;
    body["results"] = std::move(results);
    body["accepted"] = accepted;
    send_json(res, 200, std::move(body));
  });

  server_->Get("/v1/incidents", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      const QueryFilter filter = filter_from_params(req);
      const auto entries = store_.query(filter);
      json list = json::array();
      for (const auto& entry : entries) {
        json item;
        item["serial_no"] = entry.serial_no;
        item["record"] = record_to_json(entry.record);
        item["source"] = entry.source;
        item["significance"] = {{"significant", entry.significance.significant},
                                {"price_trigger", entry.significance.price_trigger},
                                {"volume_trigger", entry.significance.volume_trigger}};
        list.push_back(std::move(item));
      }
      json body;
      body["entries"] = std::move(list);
      body["count"] = entries.size();
      send_json(res, 200, std::move(body));
    } catch (const std::exception& e) {
      send_error(res, 400, "validation", e.what());
    }
  });

  server_->Get("/v1/analytics/anova", [this](const httplib::Request& req,
                                             httplib::Response& res) {
    AnovaSpec spec;
    try {
      if (req.has_param("response")) {
        spec.response = parse_anova_response(req.get_param_value("response"));
      }
      if (req.has_param("interaction")) {
        spec.include_interaction = req.get_param_value("interaction") == "true";
      }
    } catch (const ParseError& e) {
      send_error(res, 400, "validation", e.what());
      return;
    }
    try {
      const AnovaResult result = two_way_anova(store_.records(), spec);
      send_json(res, 200, anova_to_json(result, spec));
    } catch (const DegenerateDesignError& e) {
      send_error(res, 422, "degenerate-design", e.what(), {{"empty_cells", e.empty_cells()}});
    }
  });

  server_->Get("/v1/analytics/clusters", [this](const httplib::Request& req,
                                                httplib::Response& res) {
    std::size_t k = 5;
    std::uint64_t seed = 0;
    try {
      if (req.has_param("k")) k = static_cast<std::size_t>(std::stoull(req.get_param_value("k")));
      if (req.has_param("seed")) {
        seed = static_cast<std::uint64_t>(std::stoull(req.get_param_value("seed")));
      }
    } catch (const std::exception&) {
      send_error(res, 400, "validation", "k and seed must be non-negative integers");
      return;
    }
    if (k != 5) {
      send_error(res, 400, "validation", "zone taxonomy requires k = 5");
      return;
    }
    try {
      const auto records = store_.records();
      const FeatureMatrix matrix = standardize(records);
      const ClusterModel model = kmeans(matrix, k, seed);
      const PcaModel pca_model = pca(matrix);
      const ZoneMap zones = label_zones(model, pca_model, matrix, records);
      send_json(res, 200, cluster_to_json(model, pca_model, zones, matrix, records));
    } catch (const std::invalid_argument& e) {
      send_error(res, 422, "degenerate-design", e.what());
    }
  });

  server_->set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      send_error(res, res.status, res.status == 404 ? "not-found" : "internal",
                 res.status == 404 ? "no such endpoint" : "request failed");
    }
  });
}

} // namespace aiir
