#include "etma/render.hpp"

#include <charconv>
#include <cstdio>
#include <system_error>

#include "etma/error.hpp"
#include "etma/partition.hpp"

namespace etma {

namespace {

std::string dot_quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string event_list(std::span<const StateLabel> events, LabelStyle style) {
  std::string text = "[";
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i) text += ", ";
    text += format_label(events[i], style);
  }
  return text + "]";
}

}  // namespace

std::string format_label(const StateLabel& label, LabelStyle style) {
  return label.component + (style == LabelStyle::kFull ? "=" : "_") + label.state;
}

std::string format_shortest(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc{}) throw Error("cannot format number");
  return std::string(buffer, end);
}

std::string format_percent(double probability) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.15f", probability * 100.0);
  return buffer;
}

std::string to_dot(const EventTree& tree, const RenderOptions& options) {
  if (options.include_probabilities && !options.table) {
    throw ValidationError("rendering probabilities requires a probability table");
  }
  // Leaf number of each terminal, in depth-first order.
  const std::vector<Path> paths = enumerate_paths(tree);
  std::vector<std::size_t> leaf_path(tree.nodes().size(), 0);
  {
    std::size_t next = 0;
    auto visit = [&](auto&& self, NodeIndex index) -> void {
      const Node& node = tree.node(index);
      if (node.is_terminal()) {
        leaf_path[index] = next++;
        return;
      }
      for (const Edge& edge : node.edges) self(self, edge.child);
    };
    visit(visit, tree.root());
  }

  std::string out = "digraph " + dot_quote(tree.model().name) + " {\n";
  out += "  rankdir=LR;\n";
  out += "  node [shape=circle];\n";
  for (NodeIndex i = 0; i < tree.nodes().size(); ++i) {
    const Node& node = tree.node(i);
    out += "  n" + std::to_string(i) + " [";
    if (!node.is_terminal()) {
      out += "label=" + dot_quote(*node.component) + "];\n";
      continue;
    }
    const Path& path = paths[leaf_path[i]];
    std::string label;
    if (options.include_path_indices) label = "Path_" + std::to_string(path.index);
    if (options.include_probabilities) {
      if (!label.empty()) label += "\n";
      label += "P = " + format_shortest(path_probability(path, *options.table));
    }
    out += "shape=box, label=" + dot_quote(label) +
           ", tooltip=" + dot_quote(event_list(path.events, options.label_style)) +
           "];\n";
  }
  for (NodeIndex i = 0; i < tree.nodes().size(); ++i) {
    for (const Edge& edge : tree.node(i).edges) {
      out += "  n" + std::to_string(i) + " -> n" + std::to_string(edge.child) +
             " [label=" + dot_quote(edge.state) + "];\n";
    }
  }
  out += "}\n";
  return out;
}

std::string paths_report(std::span<const Path> paths, const RenderOptions& options) {
  if (options.include_probabilities && !options.table) {
    throw ValidationError("reporting probabilities requires a probability table");
  }
  std::string out;
  for (const Path& path : paths) {
    out += "Path_" + std::to_string(path.index) + " = " +
           event_list(path.events, options.label_style);
    if (options.include_probabilities) {
      out += "  P = " + format_shortest(path_probability(path, *options.table));
    }
    out += "\n";
  }
  return out;
}

std::string histogram_data(std::span<const LabeledResult> results) {
  std::string out = "label,probability_percent\r\n";
  for (const LabeledResult& r : results) {
    out += csv_field(r.label) + "," + format_shortest(r.probability * 100.0) + "\r\n";
  }
  return out;
}

}  // namespace etma
