#include "etma/service.hpp"

#include <httplib.h>

#include <unistd.h>

#include <iostream>

#include "etma/error.hpp"
#include "etma/partition.hpp"
#include "etma/redundancy.hpp"
#include "etma/render.hpp"

namespace etma {

namespace {

ApiResponse json_response(int status, const Json& body) {
  return {status, "application/json", body.dump()};
}

ApiResponse error_response(int status, const std::string& message) {
  return json_response(status, {{"error", message}});
}

Json report_to_json(const ValidationReport& report) {
  Json violations = Json::array();
  for (const Violation& v : report.violations) {
    violations.push_back({{"severity", v.severity == Severity::kError ? "error" : "warning"},
                          {"code", v.code},
                          {"component", v.component},
                          {"state", v.state},
                          {"message", v.message}});
  }
  return {{"violations", violations}, {"notes", report.notes}};
}

Json parse_body(const std::string& body) {
  if (body.empty()) throw ParseError("", "empty request body");
  return parse_json_text(body);
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= path.size()) {
    const std::size_t slash = path.find('/', start);
    const std::string part =
        path.substr(start, slash == std::string::npos ? std::string::npos : slash - start);
    if (!part.empty()) parts.push_back(part);
    if (slash == std::string::npos) break;
    start = slash + 1;
  }
  return parts;
}

std::string base_url(const std::string& id) { return "/api/models/" + id; }

Json tree_summary(const Session& session) {
  std::size_t complete = 1;
  for (const ComponentDef& c : session.model.components) complete *= c.states.size();
  return {{"id", session.id},
          {"path_count", session.tree->leaf_count()},
          {"complete_path_count", complete},
          {"directive_count", session.directives.size()},
          {"dot_url", base_url(session.id) + "/tree.dot"},
          {"paths_url", base_url(session.id) + "/paths"}};
}

ProbabilityTable checked_table(const SystemModel& model, const Json& doc) {
  ProbabilityTable table = table_from_json(doc);
  const ValidationReport report = validate_probabilities(model, table);
  if (!report.empty()) throw ValidationError(report.violations.front().message);
  return table;
}

struct Evaluated {
  PartitionResult result;
  PartitionProbability probability;
};

Evaluated evaluate_partition(const EventTree& tree, const Json& partition_doc,
                             const ProbabilityTable& table) {
  const PartitionQuery query = partition_from_json(partition_doc, tree.model());
  const std::vector<Path> paths = enumerate_paths(tree);
  PartitionResult result = partition(paths, query);
  const PartitionProbability p = partition_probability(paths, result, table);
  return {std::move(result), p};
}

Json probability_json(const PartitionProbability& p) {
  return {{"p_selected", p.selected},
          {"p_complement", p.complement},
          {"percent_selected", format_percent(p.selected)},
          {"percent_complement", format_percent(p.complement)}};
}

}  // namespace

Api::Api(const ServiceConfig& config) : store_(config.data_dir) {}

ApiResponse Api::handle(const ApiRequest& request) {
  try {
    return route(request);
  } catch (const ParseError& e) {
    return json_response(400, {{"error", e.what()}, {"where", e.where()}});
  } catch (const ConflictError& e) {
    return error_response(409, e.what());
  } catch (const NotFoundError& e) {
    return error_response(422, e.what());
  } catch (const Error& e) {
    return error_response(422, e.what());
  } catch (const std::exception& e) {
    return error_response(500, e.what());
  }
}

ApiResponse Api::route(const ApiRequest& request) {
  const std::vector<std::string> parts = split_path(request.path);
  const bool get = request.method == "GET";
  const bool post = request.method == "POST";
  if (parts.size() < 2 || parts[0] != "api") return error_response(404, "not found");
  if (parts.size() == 2 && parts[1] == "health" && get) {
    return json_response(200, {{"status", "ok"}});
  }
  if (parts[1] != "models") return error_response(404, "not found");
  if (parts.size() == 2) {
    if (post) return create_model(request.body);
    if (get) {
      Json list = Json::array();
      for (const auto& [id, name] : store_.list()) list.push_back({{"id", id}, {"name", name}});
      return json_response(200, {{"models", list}});
    }
    return error_response(405, "method not allowed");
  }
  const std::string& id = parts[2];
  if (parts.size() == 3 && get) {
    auto session = store_.get(id);
    if (!session) return error_response(404, "unknown model '" + id + "'");
    return json_response(200, to_json(*session));
  }
  if (parts.size() != 4) return error_response(404, "not found");
  const std::string& action = parts[3];
  if (post) {
    if (action == "generate") return generate(id);
    if (action == "reduce") return reduce(id, request.body);
    if (action == "evaluate") return evaluate(id, request.body);
    if (action == "whatif") return whatif(id, request.body);
  }
  if (get && (action == "tree.dot" || action == "paths" || action == "histogram.csv")) {
    return artifact(id, action);
  }
  return error_response(404, "not found");
}

ApiResponse Api::create_model(const std::string& body) {
  Session session;
  session.model = model_from_json(parse_body(body));
  const ValidationReport report = validate_model(session.model);
  if (!report.empty()) {
    Json out = report_to_json(report);
    out["error"] = "model is invalid";
    return json_response(422, out);
  }
  session.record("create");
  const std::string id = store_.create(std::move(session));
  return json_response(201, {{"id", id}, {"notes", report.notes}});
}

ApiResponse Api::generate(const std::string& id) {
  Json summary;
  const bool found = store_.update(id, [&](Session& s) {
    s.directives.clear();
    s.rebuild_tree();
    s.record("generate");
    summary = tree_summary(s);
  });
  if (!found) return error_response(404, "unknown model '" + id + "'");
  return json_response(200, summary);
}

ApiResponse Api::reduce(const std::string& id, const std::string& body) {
  const std::vector<ReductionDirective> directives = directives_from_json(parse_body(body));
  Json summary;
  const bool found = store_.update(id, [&](Session& s) {
    s.directives = directives;
    s.rebuild_tree();
    s.record("reduce");
    summary = tree_summary(s);
  });
  if (!found) return error_response(404, "unknown model '" + id + "'");
  return json_response(200, summary);
}

ApiResponse Api::evaluate(const std::string& id, const std::string& body) {
  const Json doc = parse_body(body);
  if (!doc.is_object() || !doc.contains("partition")) {
    throw ParseError("/partition", "missing field");
  }
  Json out;
  std::optional<ApiResponse> early;
  const bool found = store_.update(id, [&](Session& s) {
    if (!s.tree) {
      early = error_response(409, "tree not generated; POST .../generate first");
      return;
    }
    if (doc.contains("table")) s.table = checked_table(s.model, doc["table"]);
    if (!s.table) throw ValidationError("no probability table supplied");
    const Evaluated e = evaluate_partition(*s.tree, doc["partition"], *s.table);
    const std::string label = doc.value(
        "label", "evaluation " + std::to_string(s.evaluations.size() + 1));
    s.evaluations.push_back({label, e.probability.selected, e.probability.complement});
    s.record("evaluate");
    out = probability_json(e.probability);
    out["label"] = label;
    out["selected_indices"] = e.result.selected;
    out["complement_indices"] = e.result.complement;
  });
  if (!found) return error_response(404, "unknown model '" + id + "'");
  if (early) return *early;
  return json_response(200, out);
}

ApiResponse Api::whatif(const std::string& id, const std::string& body) {
  const Json doc = parse_body(body);
  if (!doc.is_object() || !doc.contains("duplicate") || !doc["duplicate"].is_string()) {
    throw ParseError("/duplicate", "expected a component id");
  }
  const std::string component = doc["duplicate"].get<std::string>();
  auto source = store_.get(id);
  if (!source) return error_response(404, "unknown model '" + id + "'");
  if (!source->model.find(component)) {
    return error_response(404, "unknown component '" + component + "'");
  }
  std::optional<ProbabilityTable> table = source->table;
  if (doc.contains("table")) table = checked_table(source->model, doc["table"]);

  RedundancyResult transformed =
      add_parallel_redundancy(source->model, source->directives, component, table);
  Session fork;
  fork.parent = source->id;
  fork.model = std::move(transformed.model);
  fork.directives = std::move(transformed.directives);
  fork.table = std::move(transformed.table);
  fork.history = source->history;
  fork.record("whatif duplicate " + component);
  fork.rebuild_tree();
  fork.record("generate");

  Json comparisons = Json::array();
  if (doc.contains("partitions")) {
    if (!table) throw ValidationError("comparisons need a probability table");
    const EventTree before_tree =
        source->tree ? *source->tree
                     : apply_reduction(generate_complete(source->model), source->directives);
    const Json& list = doc["partitions"];
    if (!list.is_array()) throw ParseError("/partitions", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const Json& item = list[i];
      const std::string label = item.value("label", "partition " + std::to_string(i + 1));
      const Json& before_doc = item.contains("before") ? item["before"] : item.at("partition");
      const Json& after_doc = item.contains("after") ? item["after"] : item.at("partition");
      const Evaluated before = evaluate_partition(before_tree, before_doc, *table);
      const Evaluated after = evaluate_partition(*fork.tree, after_doc, *fork.table);
      fork.evaluations.push_back(
          {label + " (before)", before.probability.selected, before.probability.complement});
      fork.evaluations.push_back(
          {label + " (after)", after.probability.selected, after.probability.complement});
      comparisons.push_back({{"label", label},
                             {"before", probability_json(before.probability)},
                             {"after", probability_json(after.probability)},
                             {"delta", after.probability.selected - before.probability.selected}});
    }
  }
  const std::string new_id = store_.create(fork);
  auto created = store_.get(new_id);
  Json out = tree_summary(*created);
  out["parent"] = id;
  out["comparisons"] = comparisons;
  return json_response(201, out);
}

ApiResponse Api::artifact(const std::string& id, const std::string& name) {
  auto session = store_.get(id);
  if (!session) return error_response(404, "unknown model '" + id + "'");
  if (name == "histogram.csv") {
    std::vector<LabeledResult> rows;
    for (const Evaluation& e : session->evaluations) rows.push_back({e.label, e.p_selected});
    return {200, "text/csv", histogram_data(rows)};
  }
  if (!session->tree) return error_response(404, "tree not generated");
  if (name == "tree.dot") return {200, "text/vnd.graphviz", to_dot(*session->tree)};
  RenderOptions options;
  if (session->table) {
    options.include_probabilities = true;
    options.table = session->table;
  }
  return {200, "text/plain", paths_report(enumerate_paths(*session->tree), options)};
}

struct Server::Impl {
  ServiceConfig config;
  Api api;
  httplib::Server http;
  int port = -1;
  bool listened = false;
  /// Last socket handed to the options hook; httplib leaks it if bound but
  /// never listened on.
  socket_t socket = INVALID_SOCKET;

  explicit Impl(ServiceConfig c) : config(std::move(c)), api(config) {
    auto adapt = [this](const httplib::Request& req, httplib::Response& res) {
      const ApiResponse out = api.handle({req.method, req.path, req.body});
      res.status = out.status;
      res.set_content(out.body, out.content_type);
    };
    // Without SO_REUSEPORT a second server on the same port fails to bind.
    http.set_socket_options([this](socket_t sock) {
      socket = sock;
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes),
                 sizeof(yes));
    });
    http.set_default_headers({{"Access-Control-Allow-Origin", config.cors_origin},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
    http.Get(R"(/api/.*)", adapt);
    http.Post(R"(/api/.*)", adapt);
    http.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
    });
    if (config.static_dir) http.set_mount_point("/", config.static_dir->string());
  }
};

Server::Server(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

Server::~Server() {
  stop();
  if (!impl_->listened && impl_->port >= 0 && impl_->socket != INVALID_SOCKET) {
    ::close(impl_->socket);
  }
}

int Server::bind() {
  if (impl_->config.port == 0) {
    impl_->port = impl_->http.bind_to_any_port(impl_->config.host);
  } else if (impl_->http.bind_to_port(impl_->config.host, impl_->config.port)) {
    impl_->port = impl_->config.port;
  } else {
    impl_->port = -1;
  }
  return impl_->port;
}

bool Server::listen() {
  impl_->listened = true;
  return impl_->http.listen_after_bind();
}

void Server::stop() {
  if (impl_->http.is_running()) impl_->http.stop();
}

Api& Server::api() { return impl_->api; }

int run_server(const ServiceConfig& config) {
  Server server(config);
  const int port = server.bind();
  if (port < 0) {
    std::cerr << "etma: cannot bind " << config.host << ":" << config.port << "\n";
    return 3;
  }
  std::cerr << "etma: serving on http://" << config.host << ":" << port << "\n";
  return server.listen() ? 0 : 3;
}

}  // namespace etma
