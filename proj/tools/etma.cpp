// etma: command-line front end for event tree modelling and analysis.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "etma/error.hpp"
#include "etma/event_tree.hpp"
#include "etma/json_io.hpp"
#include "etma/model.hpp"
#include "etma/oracle.hpp"
#include "etma/partition.hpp"
#include "etma/reduction.hpp"
#include "etma/redundancy.hpp"
#include "etma/render.hpp"
#include "etma/service.hpp"

namespace fs = std::filesystem;
using namespace etma;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;
constexpr int kInternal = 3;

constexpr double kOracleTolerance = 1e-12;

/// Missing input files are a usage problem, not an engine failure.
struct MissingFile : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json load(const std::string& path) {
  if (!fs::is_regular_file(path)) throw MissingFile("no such file: " + path);
  return read_json_file(path);
}

struct OracleMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string severity_name(Severity s) { return s == Severity::kError ? "error" : "warning"; }

void print_report(const ValidationReport& report, const std::string& source) {
  for (const Violation& v : report.violations) {
    std::cout << source << ": " << severity_name(v.severity) << ": " << v.code << ": "
              << v.message << "\n";
  }
}

void print_probability(const std::string& name, double p) {
  std::cout << name << ": " << format_shortest(p) << " (" << format_percent(p) << "%)\n";
}

void write_tree_outputs(const TreeDocument& doc, const std::string& out, const std::string& dot,
                        bool list_paths) {
  if (!out.empty()) write_text_file(out, dump(to_json(doc)));
  if (!dot.empty()) write_text_file(dot, to_dot(doc.tree));
  const std::vector<Path> paths = enumerate_paths(doc.tree);
  std::cout << "paths: " << paths.size() << "\n";
  if (list_paths) std::cout << paths_report(paths);
}

int cmd_validate(const std::string& model_path, const std::string& probs_path) {
  const SystemModel model = model_from_json(load(model_path));
  ValidationReport report = validate_model(model);
  print_report(report, model_path);
  bool ok = report.ok();
  if (!probs_path.empty()) {
    const ProbabilityTable table = table_from_json(load(probs_path));
    const ValidationReport probs = validate_probabilities(model, table);
    print_report(probs, probs_path);
    ok = ok && probs.ok();
  }
  if (ok) std::cout << "OK\n";
  return ok ? kOk : kFailure;
}

int cmd_generate(const std::string& model_path, const std::string& out, const std::string& dot,
                 bool list_paths) {
  const SystemModel model = model_from_json(load(model_path));
  require_valid(validate_model(model));
  write_tree_outputs({generate_complete(model), {}}, out, dot, list_paths);
  return kOk;
}

int cmd_reduce(const std::string& tree_path, const std::string& directives_path,
               const std::string& out, const std::string& dot, bool list_paths) {
  TreeDocument doc = tree_from_json(load(tree_path));
  const std::vector<ReductionDirective> directives =
      directives_from_json(load(directives_path));
  doc.tree = apply_reduction(doc.tree, directives);
  doc.reductions.push_back(directives);
  write_tree_outputs(doc, out, dot, list_paths);
  return kOk;
}

PartitionQuery load_query(const std::string& partition_path, const std::string& indices,
                          const SystemModel& model) {
  if (!indices.empty()) return PartitionQuery::Indices(parse_index_ranges(indices));
  if (partition_path.empty()) throw MissingFile("a partition file or --indices is required");
  return partition_from_json(load(partition_path), model);
}

int cmd_partition(const std::string& tree_path, const std::string& partition_path,
                  const std::string& indices) {
  const TreeDocument doc = tree_from_json(load(tree_path));
  const PartitionQuery query = load_query(partition_path, indices, doc.tree.model());
  const PartitionResult result = partition(doc.tree, query);
  std::cout << "selected: " << format_index_set(result.selected) << "\n";
  std::cout << "complement: " << format_index_set(result.complement) << "\n";
  return kOk;
}

int cmd_eval(const std::string& tree_path, const std::string& probs_path,
             const std::string& partition_path, const std::string& indices, bool oracle,
             const std::string& csv, std::string label) {
  const TreeDocument doc = tree_from_json(load(tree_path));
  const SystemModel& model = doc.tree.model();
  const ProbabilityTable table = table_from_json(load(probs_path));
  require_valid(validate_probabilities(model, table));
  const PartitionQuery query = load_query(partition_path, indices, model);
  const std::vector<Path> paths = enumerate_paths(doc.tree);
  const PartitionResult result = partition(doc.tree, query);
  const PartitionProbability p = partition_probability(paths, result, table);
  std::cout << "selected: " << format_index_set(result.selected) << "\n";
  print_probability("p_selected", p.selected);
  print_probability("p_complement", p.complement);
  if (oracle) {
    const double reference = oracle_brute_force(model, doc.reductions, table, query);
    const double diff = std::abs(reference - p.selected);
    print_probability("oracle", reference);
    if (!(diff <= kOracleTolerance)) {
      throw OracleMismatch("engine and oracle disagree by " + format_shortest(diff));
    }
    std::cout << "oracle: agree\n";
  }
  if (!csv.empty()) {
    if (label.empty()) label = partition_path.empty() ? indices : fs::path(partition_path).stem().string();
    const std::vector<LabeledResult> rows{{label, p.selected}};
    write_text_file(csv, histogram_data(rows));
  }
  return kOk;
}

struct WhatIfArgs {
  std::string model_path;
  std::string directives_path;
  std::string duplicate;
  std::string probs_path;
  std::vector<std::string> partitions;
  std::string out_model;
  std::string out_directives;
  std::string out_probs;
  std::string out_tree;
  bool list_paths = false;
};

int cmd_whatif(const WhatIfArgs& a) {
  const SystemModel model = model_from_json(load(a.model_path));
  require_valid(validate_model(model));
  const std::vector<ReductionDirective> directives = directives_from_json(load(a.directives_path));
  std::optional<ProbabilityTable> table;
  if (!a.probs_path.empty()) {
    table = table_from_json(load(a.probs_path));
    require_valid(validate_probabilities(model, *table));
  }
  const RedundancyResult result = add_parallel_redundancy(model, directives, a.duplicate, table);
  const TreeDocument doc{apply_reduction(generate_complete(result.model), result.directives),
                         {result.directives}};
  if (!a.out_model.empty()) write_text_file(a.out_model, dump(to_json(result.model)));
  if (!a.out_directives.empty()) {
    write_text_file(a.out_directives, dump(to_json(std::span(result.directives))));
  }
  if (!a.out_probs.empty() && result.table) {
    write_text_file(a.out_probs, dump(to_json(*result.table)));
  }
  if (!a.out_tree.empty()) write_text_file(a.out_tree, dump(to_json(doc)));
  const std::vector<Path> paths = enumerate_paths(doc.tree);
  std::cout << "directives: " << result.directives.size() << "\n";
  std::cout << "paths: " << paths.size() << "\n";
  if (a.list_paths) std::cout << paths_report(paths);
  if (!a.partitions.empty() && !result.table) {
    throw ValidationError("--partition needs --probs");
  }
  for (const std::string& path : a.partitions) {
    const PartitionQuery query = partition_from_json(load(path), result.model);
    const PartitionResult selected = partition(doc.tree, query);
    const PartitionProbability p = partition_probability(paths, selected, *result.table);
    std::cout << "partition: " << fs::path(path).stem().string() << "\n";
    std::cout << "selected: " << format_index_set(selected.selected) << "\n";
    print_probability("p_selected", p.selected);
    print_probability("p_complement", p.complement);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event tree modelling and analysis"};
  app.require_subcommand(1);

  std::string model_path, probs_path, tree_path, directives_path, partition_path;
  std::string out, dot, csv, label, indices;
  bool list_paths = false;
  bool oracle = false;

  auto* validate = app.add_subcommand("validate", "Check a model and optional probability table");
  validate->add_option("model", model_path, "Model JSON")->required();
  validate->add_option("probs", probs_path, "Probability table JSON");

  auto* generate = app.add_subcommand("generate", "Build the complete event tree");
  generate->add_option("model", model_path, "Model JSON")->required();
  generate->add_option("--out", out, "Write tree JSON");
  generate->add_option("--dot", dot, "Write Graphviz DOT");
  generate->add_flag("--paths", list_paths, "List paths on stdout");

  auto* reduce = app.add_subcommand("reduce", "Apply reduction directives to a tree");
  reduce->add_option("tree", tree_path, "Tree JSON")->required();
  reduce->add_option("directives", directives_path, "Directives JSON")->required();
  reduce->add_option("--out", out, "Write tree JSON");
  reduce->add_option("--dot", dot, "Write Graphviz DOT");
  reduce->add_flag("--paths", list_paths, "List paths on stdout");

  auto* part = app.add_subcommand("partition", "Split tree paths into selected and complement");
  part->add_option("tree", tree_path, "Tree JSON")->required();
  part->add_option("partition", partition_path, "Partition JSON");
  part->add_option("--indices", indices, "Path indices, e.g. 3,5,7-10");

  auto* eval = app.add_subcommand("eval", "Probability of a partition");
  eval->add_option("tree", tree_path, "Tree JSON")->required();
  eval->add_option("probs", probs_path, "Probability table JSON")->required();
  eval->add_option("partition", partition_path, "Partition JSON");
  eval->add_option("--indices", indices, "Path indices, e.g. 3,5,7-10");
  eval->add_flag("--oracle", oracle, "Cross-check against brute-force enumeration");
  eval->add_option("--csv", csv, "Write histogram CSV");
  eval->add_option("--label", label, "Label for the CSV row");

  WhatIfArgs w;
  auto* whatif = app.add_subcommand("whatif", "Add 1-out-of-2 redundancy to a component");
  whatif->add_option("model", w.model_path, "Model JSON")->required();
  whatif->add_option("directives", w.directives_path, "Directives JSON")->required();
  whatif->add_option("--duplicate", w.duplicate, "Component to duplicate")->required();
  whatif->add_option("--probs", w.probs_path, "Probability table JSON");
  whatif->add_option("--partition", w.partitions, "Partition JSON on the new tree");
  whatif->add_option("--out-model", w.out_model, "Write the new model");
  whatif->add_option("--out-directives", w.out_directives, "Write the new directives");
  whatif->add_option("--out-probs", w.out_probs, "Write the new probability table");
  whatif->add_option("--out", w.out_tree, "Write the new reduced tree");
  whatif->add_flag("--paths", w.list_paths, "List paths on stdout");

  ServiceConfig config;
  if (const char* env = std::getenv("ETMA_DATA_DIR"); env && *env) config.data_dir = env;
  std::string data_dir, static_dir;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--host", config.host, "Listen address");
  serve->add_option("--port", config.port, "Listen port")->check(CLI::Range(0, 65535));
  serve->add_option("--data-dir", data_dir, "Session directory (default $ETMA_DATA_DIR)");
  serve->add_option("--cors-origin", config.cors_origin, "Access-Control-Allow-Origin value");
  serve->add_option("--static-dir", static_dir, "Serve a web client from this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*validate) return cmd_validate(model_path, probs_path);
    if (*generate) return cmd_generate(model_path, out, dot, list_paths);
    if (*reduce) return cmd_reduce(tree_path, directives_path, out, dot, list_paths);
    if (*part) return cmd_partition(tree_path, partition_path, indices);
    if (*eval) {
      return cmd_eval(tree_path, probs_path, partition_path, indices, oracle, csv, label);
    }
    if (*whatif) return cmd_whatif(w);
    if (*serve) {
      if (!data_dir.empty()) config.data_dir = data_dir;
      if (!static_dir.empty()) config.static_dir = static_dir;
      return run_server(config);
    }
  } catch (const MissingFile& e) {
    std::cerr << "etma: " << e.what() << "\n";
    return kUsage;
  } catch (const OracleMismatch& e) {
    std::cerr << "etma: " << e.what() << "\n";
    return kInternal;
  } catch (const Error& e) {
    std::cerr << "etma: " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "etma: internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
