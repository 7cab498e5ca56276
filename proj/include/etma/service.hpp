#pragma once

/// @file service.hpp
/// HTTP/JSON API over the engine.
///
///   GET  /api/health
///   GET  /api/models                         list sessions
///   POST /api/models                         body: model document
///   GET  /api/models/{id}                    session document
///   POST /api/models/{id}/generate
///   POST /api/models/{id}/reduce             body: directives document
///   POST /api/models/{id}/evaluate           body: {partition, table?, label?}
///   POST /api/models/{id}/whatif             body: {duplicate, table?, partitions?}
///   GET  /api/models/{id}/tree.dot | /paths | /histogram.csv

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "etma/session_store.hpp"

namespace etma {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::optional<std::filesystem::path> data_dir;
  std::string cors_origin = "*";
  /// Static assets (the browser workbench) served under "/".
  std::optional<std::filesystem::path> static_dir;
};

struct ApiRequest {
  std::string method;
  std::string path;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// Transport-independent request dispatcher.
class Api {
 public:
  explicit Api(const ServiceConfig& config);

  ApiResponse handle(const ApiRequest& request);
  SessionStore& store() { return store_; }

 private:
  ApiResponse route(const ApiRequest& request);
  ApiResponse create_model(const std::string& body);
  ApiResponse generate(const std::string& id);
  ApiResponse reduce(const std::string& id, const std::string& body);
  ApiResponse evaluate(const std::string& id, const std::string& body);
  ApiResponse whatif(const std::string& id, const std::string& body);
  ApiResponse artifact(const std::string& id, const std::string& name);

  SessionStore store_;
};

/// cpp-httplib server wrapping an Api.
class Server {
 public:
  explicit Server(ServiceConfig config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds to config.port (0 picks a free port). Returns the bound port,
  /// or -1 if binding failed.
  int bind();
  /// Blocks until stop().
  bool listen();
  void stop();
  Api& api();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Serves until the process is stopped. Returns 3 if the port cannot be bound.
int run_server(const ServiceConfig& config);

}  // namespace etma
