#include "etma/json_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "etma/error.hpp"

namespace etma {

namespace {

std::string child(const std::string& where, std::string_view key) {
  return where + "/" + std::string(key);
}

std::string child(const std::string& where, std::size_t index) {
  return where + "/" + std::to_string(index);
}

void require_object(const Json& doc, const std::string& where) {
  if (!doc.is_object()) throw ParseError(where.empty() ? "/" : where, "expected an object");
}

const Json& field(const Json& obj, std::string_view key, const std::string& where) {
  require_object(obj, where);
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(child(where, key), "missing field");
  return *it;
}

const Json& array_field(const Json& obj, std::string_view key, const std::string& where) {
  const Json& value = field(obj, key, where);
  if (!value.is_array()) throw ParseError(child(where, key), "expected an array");
  return value;
}

std::string as_string(const Json& value, const std::string& where) {
  if (!value.is_string()) throw ParseError(where, "expected a string");
  return value.get<std::string>();
}

double as_number(const Json& value, const std::string& where) {
  if (!value.is_number()) throw ParseError(where, "expected a number");
  return value.get<double>();
}

std::size_t as_index(const Json& value, const std::string& where) {
  if (!value.is_number_integer() || (!value.is_number_unsigned() && value.get<long long>() < 0)) {
    throw ParseError(where, "expected a non-negative integer");
  }
  return value.get<std::size_t>();
}

void check_format(const Json& doc, std::string_view expected) {
  const Json& tag = field(doc, "format", "");
  const std::string value = as_string(tag, "/format");
  if (value != expected) {
    throw ParseError("/format", "unsupported format '" + value + "', expected '" +
                                    std::string(expected) + "'");
  }
}

void check_optional_format(const Json& doc, std::string_view expected) {
  if (doc.is_object() && doc.contains("format")) check_format(doc, expected);
}

StateLabel label_from_json(const Json& doc, const std::string& where) {
  StateLabel label;
  label.component = as_string(field(doc, "component", where), child(where, "component"));
  label.state = as_string(field(doc, "state", where), child(where, "state"));
  if (doc.contains("display")) {
    label.display = as_string(doc["display"], child(where, "display"));
  }
  return label;
}

Json label_to_json(const StateLabel& label) {
  Json doc = {{"component", label.component}, {"state", label.state}};
  if (label.display) doc["display"] = *label.display;
  return doc;
}

std::vector<ReductionDirective> directive_list(const Json& list, const std::string& where) {
  std::vector<ReductionDirective> directives;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string at = child(where, i);
    ReductionDirective d;
    const Json& prefix = array_field(list[i], "prefix", at);
    for (std::size_t k = 0; k < prefix.size(); ++k) {
      d.prefix.push_back(label_from_json(prefix[k], child(child(at, "prefix"), k)));
    }
    if (list[i].contains("retain")) {
      const Json& retain = array_field(list[i], "retain", at);
      for (std::size_t k = 0; k < retain.size(); ++k) {
        d.retain.push_back(as_string(retain[k], child(child(at, "retain"), k)));
      }
    }
    directives.push_back(std::move(d));
  }
  return directives;
}

}  // namespace

Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError("", std::string("malformed JSON: ") + e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Json read_json_file(const std::filesystem::path& path) {
  try {
    return parse_json_text(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(e.where(), path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

SystemModel model_from_json(const Json& doc) {
  check_format(doc, kModelFormat);
  SystemModel model;
  model.name = as_string(field(doc, "name", ""), "/name");
  const Json& components = array_field(doc, "components", "");
  for (std::size_t i = 0; i < components.size(); ++i) {
    const std::string at = child("/components", i);
    ComponentDef c;
    c.id = as_string(field(components[i], "id", at), child(at, "id"));
    const Json& states = array_field(components[i], "states", at);
    for (std::size_t k = 0; k < states.size(); ++k) {
      c.states.push_back(as_string(states[k], child(child(at, "states"), k)));
    }
    if (components[i].contains("failure_rate")) {
      c.failure_rate =
          as_number(components[i]["failure_rate"], child(at, "failure_rate"));
    }
    model.components.push_back(std::move(c));
  }
  return model;
}

Json to_json(const SystemModel& model) {
  Json components = Json::array();
  for (const ComponentDef& c : model.components) {
    Json entry = {{"id", c.id}, {"states", c.states}};
    if (c.failure_rate) entry["failure_rate"] = *c.failure_rate;
    components.push_back(std::move(entry));
  }
  return {{"format", kModelFormat}, {"name", model.name}, {"components", components}};
}

std::string model_hash(const SystemModel& model) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_json(model).dump()) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hash));
  return hex;
}

ProbabilityTable table_from_json(const Json& doc) {
  check_format(doc, kProbsFormat);
  ProbabilityTable table;
  if (doc.contains("tolerance")) table.set_tolerance(as_number(doc["tolerance"], "/tolerance"));
  const Json& entries = array_field(doc, "entries", "");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string at = child("/entries", i);
    table.set(as_string(field(entries[i], "component", at), child(at, "component")),
              as_string(field(entries[i], "state", at), child(at, "state")),
              as_number(field(entries[i], "p", at), child(at, "p")));
  }
  return table;
}

Json to_json(const ProbabilityTable& table) {
  Json entries = Json::array();
  for (const auto& [key, p] : table.entries()) {
    entries.push_back({{"component", key.first}, {"state", key.second}, {"p", p}});
  }
  return {{"format", kProbsFormat}, {"tolerance", table.tolerance()}, {"entries", entries}};
}

std::vector<ReductionDirective> directives_from_json(const Json& doc) {
  if (doc.is_array()) return directive_list(doc, "");
  check_format(doc, kDirectivesFormat);
  return directive_list(array_field(doc, "directives", ""), "/directives");
}

Json to_json(std::span<const ReductionDirective> directives) {
  Json list = Json::array();
  for (const ReductionDirective& d : directives) {
    Json prefix = Json::array();
    for (const StateLabel& label : d.prefix) prefix.push_back(label_to_json(label));
    list.push_back({{"prefix", prefix}, {"retain", d.retain}});
  }
  return {{"format", kDirectivesFormat}, {"directives", list}};
}

StateLabel parse_event(std::string_view text, const SystemModel& model) {
  const std::string value(text);
  if (auto eq = value.find('='); eq != std::string::npos) {
    StateLabel label{value.substr(0, eq), value.substr(eq + 1), std::nullopt};
    if (!model.resolves(label)) throw NotFoundError("unknown event '" + value + "'");
    return label;
  }
  std::optional<StateLabel> found;
  for (std::size_t pos = value.find('_'); pos != std::string::npos;
       pos = value.find('_', pos + 1)) {
    StateLabel label{value.substr(0, pos), value.substr(pos + 1), std::nullopt};
    if (!model.resolves(label)) continue;
    if (found) throw ParseError("", "ambiguous event '" + value + "', use COMPONENT=STATE");
    found = std::move(label);
  }
  if (!found) throw NotFoundError("unknown event '" + value + "'");
  return *found;
}

PartitionQuery partition_from_json(const Json& doc, const SystemModel& model) {
  check_optional_format(doc, kPartitionFormat);
  const std::string mode = as_string(field(doc, "mode", ""), "/mode");
  const Json& values = array_field(doc, "values", "");
  if (mode == "indices") {
    std::vector<std::size_t> indices;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const std::string at = child("/values", i);
      if (values[i].is_string()) {
        try {
          for (std::size_t index : parse_index_ranges(values[i].get<std::string>())) {
            indices.push_back(index);
          }
        } catch (const ParseError& e) {
          throw ParseError(at, e.what());
        }
      } else {
        indices.push_back(as_index(values[i], at));
      }
    }
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    return PartitionQuery::Indices(std::move(indices));
  }
  if (mode != "contains_all" && mode != "contains_any") {
    throw ParseError("/mode", "unknown partition mode '" + mode + "'");
  }
  std::vector<StateLabel> events;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::string at = child("/values", i);
    StateLabel label = values[i].is_string()
                           ? parse_event(values[i].get<std::string>(), model)
                           : label_from_json(values[i], at);
    if (!model.resolves(label)) {
      throw NotFoundError("unknown event " + compact_label(label) + " at " + at);
    }
    events.push_back(std::move(label));
  }
  return mode == "contains_all" ? PartitionQuery::ContainsAll(std::move(events))
                                : PartitionQuery::ContainsAny(std::move(events));
}

Json to_json(const PartitionQuery& query) {
  Json doc = {{"format", kPartitionFormat}};
  switch (query.mode) {
    case PartitionQuery::Mode::kIndices:
      doc["mode"] = "indices";
      doc["values"] = query.indices;
      return doc;
    case PartitionQuery::Mode::kContainsAll:
      doc["mode"] = "contains_all";
      break;
    case PartitionQuery::Mode::kContainsAny:
      doc["mode"] = "contains_any";
      break;
  }
  Json values = Json::array();
  for (const StateLabel& label : query.events) values.push_back(label_to_json(label));
  doc["values"] = values;
  return doc;
}

TreeDocument tree_from_json(const Json& doc) {
  check_format(doc, kTreeFormat);
  SystemModel model = model_from_json(field(doc, "system", ""));
  const Json& reference = field(doc, "model", "");
  const std::string name = as_string(field(reference, "name", "/model"), "/model/name");
  const std::string hash = as_string(field(reference, "hash", "/model"), "/model/hash");
  if (name != model.name || hash != model_hash(model)) {
    throw ParseError("/model", "model reference does not match the embedded system");
  }
  std::vector<std::vector<ReductionDirective>> reductions;
  if (doc.contains("reductions")) {
    const Json& passes = array_field(doc, "reductions", "");
    for (std::size_t i = 0; i < passes.size(); ++i) {
      if (!passes[i].is_array()) {
        throw ParseError(child("/reductions", i), "expected an array");
      }
      reductions.push_back(directive_list(passes[i], child("/reductions", i)));
    }
  }
  const Json& nodes_doc = array_field(doc, "nodes", "");
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < nodes_doc.size(); ++i) {
    const std::string at = child("/nodes", i);
    Node node;
    const Json& component = field(nodes_doc[i], "component", at);
    if (!component.is_null()) node.component = as_string(component, child(at, "component"));
    const Json& edges = array_field(nodes_doc[i], "edges", at);
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const std::string edge_at = child(child(at, "edges"), k);
      node.edges.push_back(
          Edge{as_string(field(edges[k], "state", edge_at), child(edge_at, "state")),
               as_index(field(edges[k], "child", edge_at), child(edge_at, "child"))});
    }
    nodes.push_back(std::move(node));
  }
  const std::size_t root = as_index(field(doc, "root", ""), "/root");
  return TreeDocument{EventTree(std::move(model), std::move(nodes), root),
                      std::move(reductions)};
}

Json to_json(const TreeDocument& doc) {
  const EventTree& tree = doc.tree;
  Json nodes = Json::array();
  for (const Node& node : tree.nodes()) {
    Json edges = Json::array();
    for (const Edge& edge : node.edges) {
      edges.push_back({{"state", edge.state}, {"child", edge.child}});
    }
    nodes.push_back({{"component", node.component ? Json(*node.component) : Json(nullptr)},
                     {"edges", edges}});
  }
  Json reductions = Json::array();
  for (const auto& pass : doc.reductions) {
    reductions.push_back(to_json(std::span<const ReductionDirective>(pass))["directives"]);
  }
  return {{"format", kTreeFormat},
          {"model", {{"name", tree.model().name}, {"hash", model_hash(tree.model())}}},
          {"system", to_json(tree.model())},
          {"reductions", reductions},
          {"root", tree.root()},
          {"nodes", nodes}};
}

}  // namespace etma
