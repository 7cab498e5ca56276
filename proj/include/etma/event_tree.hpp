#pragma once

/// @file event_tree.hpp
/// Arena-backed event tree and its sequence-preserving generation.
///
/// Nodes are stored in depth-first preorder, so two trees with the same
/// shape and labels compare equal as values.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "etma/model.hpp"

namespace etma {

using NodeIndex = std::size_t;

struct Edge {
  std::string state;
  NodeIndex child = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// A component node branches on the component's states. A terminal node
/// (no component) ends a path; truncated and exhausted paths both end in one.
struct Node {
  std::optional<std::string> component;
  std::vector<Edge> edges;

  bool is_terminal() const { return !component.has_value(); }

  friend bool operator==(const Node&, const Node&) = default;
};

class EventTree {
 public:
  /// Checks the arena is an arborescence rooted at `root` whose component
  /// nodes follow model order along every path. Throws ValidationError.
  EventTree(SystemModel model, std::vector<Node> nodes, NodeIndex root = 0);

  const SystemModel& model() const { return model_; }
  std::span<const Node> nodes() const { return nodes_; }
  const Node& node(NodeIndex index) const { return nodes_.at(index); }
  NodeIndex root() const { return root_; }
  std::size_t leaf_count() const;

  friend bool operator==(const EventTree&, const EventTree&) = default;

 private:
  SystemModel model_;
  std::vector<Node> nodes_;
  NodeIndex root_ = 0;
};

/// One root-to-leaf sequence of events.
struct Path {
  std::size_t index = 0;
  std::vector<StateLabel> events;

  friend bool operator==(const Path&, const Path&) = default;
};

/// Complete tree: its paths are the Cartesian product of all outcome spaces
/// in declared order. Throws DomainError for a model without components.
EventTree generate_complete(const SystemModel& model);

/// Depth-first, declared-edge-order listing. Indices are dense from 0.
std::vector<Path> enumerate_paths(const EventTree& tree);

}  // namespace etma
