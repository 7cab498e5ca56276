#pragma once

/// @file render.hpp
/// Deterministic text exports: Graphviz DOT, path listings, CSV.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "etma/event_tree.hpp"
#include "etma/model.hpp"

namespace etma {

enum class LabelStyle {
  kFull,     // CT=O
  kCompact,  // CT_O
};

struct RenderOptions {
  LabelStyle label_style = LabelStyle::kCompact;
  bool include_path_indices = true;
  /// Requires `table`; to_dot throws ValidationError otherwise.
  bool include_probabilities = false;
  std::optional<ProbabilityTable> table;
};

struct LabeledResult {
  std::string label;
  double probability = 0.0;
};

std::string format_label(const StateLabel& label, LabelStyle style);

/// Shortest decimal text that round-trips to the same double.
std::string format_shortest(double value);
/// Percent with 15 fixed decimals, e.g. 0.053899608064 -> "5.389960806400000".
std::string format_percent(double probability);

/// digraph with rankdir=LR. Node ids are arena indices ("n0", "n1", ...);
/// edge labels are state ids; terminal nodes are drawn as boxes labelled
/// with their path.
std::string to_dot(const EventTree& tree, const RenderOptions& options = {});

/// One "Path_k = [CT_O, R_O, ...]" line per path.
std::string paths_report(std::span<const Path> paths, const RenderOptions& options = {});

/// CSV with header "label,probability_percent", values in percent.
std::string histogram_data(std::span<const LabeledResult> results);

}  // namespace etma
