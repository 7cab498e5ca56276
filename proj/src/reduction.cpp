#include "etma/reduction.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "etma/error.hpp"

namespace etma {

namespace {

using Arena = std::vector<Node>;

std::string describe(std::span<const StateLabel> events) {
  std::string text = "[";
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i) text += ", ";
    text += compact_label(events[i]);
  }
  return text + "]";
}

bool is_prefix_of(std::span<const StateLabel> shorter,
                  std::span<const StateLabel> longer) {
  return shorter.size() <= longer.size() &&
         std::equal(shorter.begin(), shorter.end(), longer.begin());
}

// Appends a preorder arena rooted at 0 to `out`; returns the new root index.
NodeIndex graft(Arena& out, const Arena& sub) {
  const NodeIndex offset = out.size();
  for (Node node : sub) {
    for (Edge& edge : node.edges) edge.child += offset;
    out.push_back(std::move(node));
  }
  return offset;
}

// Subtree at `index` with every component outside `retain` spliced out.
Arena filtered(const EventTree& tree, NodeIndex index,
               const std::set<std::string, std::less<>>& retain,
               const ReductionDirective& directive) {
  const Node& node = tree.node(index);
  if (node.is_terminal()) return Arena{Node{}};
  if (retain.contains(*node.component)) {
    Arena out{Node{node.component, {}}};
    for (const Edge& edge : node.edges) {
      const NodeIndex child = graft(out, filtered(tree, edge.child, retain, directive));
      out.front().edges.push_back(Edge{edge.state, child});
    }
    return out;
  }
  Arena continuation = filtered(tree, node.edges.front().child, retain, directive);
  for (std::size_t i = 1; i < node.edges.size(); ++i) {
    if (filtered(tree, node.edges[i].child, retain, directive) != continuation) {
      throw ConflictError("cannot delete node '" + *node.component +
                          "' under prefix " + describe(directive.prefix) +
                          ": its branches lead to different continuations");
    }
  }
  return continuation;
}

// Node reached after the prefix, or nullopt when the path was already
// truncated above the end of the prefix.
std::optional<NodeIndex> resolve(const EventTree& tree,
                                 const ReductionDirective& directive) {
  NodeIndex current = tree.root();
  for (const StateLabel& event : directive.prefix) {
    const Node& node = tree.node(current);
    if (node.is_terminal()) return std::nullopt;
    auto edge = std::find_if(node.edges.begin(), node.edges.end(),
                             [&](const Edge& e) { return e.state == event.state; });
    if (*node.component != event.component || edge == node.edges.end()) {
      throw NotFoundError("prefix event " + compact_label(event) + " of " +
                          describe(directive.prefix) + " not found in tree");
    }
    current = edge->child;
  }
  return current;
}

NodeIndex rebuild(const EventTree& tree, NodeIndex index,
                  const std::map<NodeIndex, const ReductionDirective*>& targets,
                  Arena& out) {
  if (auto hit = targets.find(index); hit != targets.end()) {
    const ReductionDirective& directive = *hit->second;
    const std::set<std::string, std::less<>> retain(directive.retain.begin(),
                                                    directive.retain.end());
    return graft(out, filtered(tree, index, retain, directive));
  }
  const Node& node = tree.node(index);
  const NodeIndex self = out.size();
  out.push_back(Node{node.component, {}});
  for (const Edge& edge : node.edges) {
    const NodeIndex child = rebuild(tree, edge.child, targets, out);
    out[self].edges.push_back(Edge{edge.state, child});
  }
  return self;
}

}  // namespace

void validate_directives(const SystemModel& model,
                         std::span<const ReductionDirective> directives) {
  for (const ReductionDirective& d : directives) {
    if (d.prefix.empty()) throw ValidationError("directive with empty prefix");
    std::optional<std::size_t> last;
    for (const StateLabel& event : d.prefix) {
      if (!model.resolves(event)) {
        throw NotFoundError("unknown event " + compact_label(event) +
                            " in prefix " + describe(d.prefix));
      }
      const std::size_t position = *model.position(event.component);
      if (last && position <= *last) {
        throw ValidationError("prefix " + describe(d.prefix) +
                              " is not in model order");
      }
      last = position;
    }
    for (const std::string& component : d.retain) {
      auto position = model.position(component);
      if (!position) {
        throw NotFoundError("unknown component '" + component +
                            "' retained under " + describe(d.prefix));
      }
      if (*position <= *last) {
        throw ValidationError("retained component '" + component +
                              "' does not follow prefix " + describe(d.prefix) +
                              " in model order");
      }
      last = position;
    }
  }
  for (std::size_t i = 0; i < directives.size(); ++i) {
    for (std::size_t j = i + 1; j < directives.size(); ++j) {
      const ReductionDirective& a = directives[i];
      const ReductionDirective& b = directives[j];
      if (a == b) continue;
      if (is_prefix_of(a.prefix, b.prefix) || is_prefix_of(b.prefix, a.prefix)) {
        throw ConflictError("conflicting directives " + describe(a.prefix) + " and " +
                            describe(b.prefix) + ": prefixes overlap");
      }
    }
  }
}

EventTree apply_reduction(const EventTree& tree,
                          std::span<const ReductionDirective> directives) {
  validate_directives(tree.model(), directives);
  std::map<NodeIndex, const ReductionDirective*> targets;
  for (const ReductionDirective& d : directives) {
    if (auto node = resolve(tree, d)) targets.emplace(*node, &d);
  }
  Arena out;
  out.reserve(tree.nodes().size());
  rebuild(tree, tree.root(), targets, out);
  return EventTree(tree.model(), std::move(out), 0);
}

}  // namespace etma
