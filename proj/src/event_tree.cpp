#include "etma/event_tree.hpp"

#include <algorithm>

#include "etma/error.hpp"

namespace etma {

namespace {

void check_arborescence(const SystemModel& model, const std::vector<Node>& nodes,
                        NodeIndex root) {
  if (root >= nodes.size()) throw ValidationError("root index out of range");
  std::vector<bool> seen(nodes.size(), false);
  struct Frame {
    NodeIndex node;
    std::size_t min_position;  // first model position allowed at this node
  };
  std::vector<Frame> stack{{root, 0}};
  std::size_t visited = 0;
  while (!stack.empty()) {
    const Frame frame = stack.back();
    stack.pop_back();
    if (seen[frame.node]) {
      throw ValidationError("node " + std::to_string(frame.node) +
                            " is reachable more than once");
    }
    seen[frame.node] = true;
    ++visited;
    const Node& node = nodes[frame.node];
    if (node.is_terminal()) {
      if (!node.edges.empty()) {
        throw ValidationError("terminal node " + std::to_string(frame.node) +
                              " has outgoing edges");
      }
      continue;
    }
    auto position = model.position(*node.component);
    if (!position) {
      throw ValidationError("node " + std::to_string(frame.node) +
                            " references unknown component '" +
                            *node.component + "'");
    }
    if (*position < frame.min_position) {
      throw ValidationError("component '" + *node.component +
                            "' is out of model order on some path");
    }
    if (node.edges.empty()) {
      throw ValidationError("component node " + std::to_string(frame.node) +
                            " has no edges");
    }
    std::optional<std::size_t> previous;
    for (const Edge& edge : node.edges) {
      auto state = model.state_index(*node.component, edge.state);
      if (!state) {
        throw ValidationError("edge state '" + edge.state +
                              "' is not a state of '" + *node.component + "'");
      }
      if (previous && *state <= *previous) {
        throw ValidationError("edges of '" + *node.component +
                              "' are not in declared state order");
      }
      previous = state;
      if (edge.child >= nodes.size()) {
        throw ValidationError("edge child index out of range");
      }
      stack.push_back({edge.child, *position + 1});
    }
  }
  if (visited != nodes.size()) {
    throw ValidationError("tree has nodes unreachable from the root");
  }
}

NodeIndex build_complete(const SystemModel& model, std::size_t level,
                         std::vector<Node>& nodes) {
  const NodeIndex index = nodes.size();
  if (level == model.components.size()) {
    nodes.push_back(Node{});
    return index;
  }
  const ComponentDef& component = model.components[level];
  nodes.push_back(Node{component.id, {}});
  for (const std::string& state : component.states) {
    const NodeIndex child = build_complete(model, level + 1, nodes);
    nodes[index].edges.push_back(Edge{state, child});
  }
  return index;
}

}  // namespace

EventTree::EventTree(SystemModel model, std::vector<Node> nodes, NodeIndex root)
    : model_(std::move(model)), nodes_(std::move(nodes)), root_(root) {
  check_arborescence(model_, nodes_, root_);
}

std::size_t EventTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(),
                    [](const Node& n) { return n.is_terminal(); }));
}

EventTree generate_complete(const SystemModel& model) {
  if (model.components.empty()) {
    throw DomainError("cannot generate an event tree for a model without components");
  }
  std::vector<Node> nodes;
  build_complete(model, 0, nodes);
  return EventTree(model, std::move(nodes), 0);
}

std::vector<Path> enumerate_paths(const EventTree& tree) {
  std::vector<Path> paths;
  std::vector<StateLabel> events;
  auto visit = [&](auto&& self, NodeIndex index) -> void {
    const Node& node = tree.node(index);
    if (node.is_terminal()) {
      paths.push_back(Path{paths.size(), events});
      return;
    }
    for (const Edge& edge : node.edges) {
      events.push_back(StateLabel{*node.component, edge.state, std::nullopt});
      self(self, edge.child);
      events.pop_back();
    }
  };
  visit(visit, tree.root());
  return paths;
}

}  // namespace etma
