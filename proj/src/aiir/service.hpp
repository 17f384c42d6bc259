#pragma once

// HTTP surface over the store and analytics. JSON in, JSON out, every
// response body carrying schema_version, and no timestamps anywhere in the
// payloads (the transport honors the same temporal-omission stance as the
// records themselves).
//
// Endpoints:
//   GET  /v1/health              -> {status, records, schema_version}
//   POST /v1/incidents           -> 201 {serial_no} | 400/409/422 error body
//   POST /v1/incidents:batch     -> 200 {results: [...per record...]}
//   GET  /v1/incidents           -> query params: any enum/bool column
//                                   (market_region=EMEA), <field>_min/_max
//                                   numeric ranges, limit, offset
//   GET  /v1/analytics/anova     -> params: response, interaction
//   GET  /v1/analytics/clusters  -> params: k (must be 5), seed
// Error bodies: {schema_version, error: {code, message, ...}} with code in
// {validation, duplicate, insignificant, degenerate-design, not-found}.

#include <memory>
#include <string>

#include "aiir/store.hpp"

namespace httplib {
class Server;
}

namespace aiir {

class Service {
public:
  explicit Service(Store& store);
  ~Service();

  // Binds and serves until stop() (blocking). Returns false when the port
  // cannot be bound.
  bool listen(const std::string& host, int port);
  // Binds an ephemeral port and returns it without serving; call
  // serve_after_bind() on another thread. Used by tests.
  int bind_any_port(const std::string& host);
  bool serve_after_bind();
  void stop();

private:
  void register_routes();

  Store& store_;
  std::unique_ptr<httplib::Server> server_;
};

} // namespace aiir
