#pragma once

/// @file partition.hpp
/// Selection of outcome-space paths and their probabilities.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "etma/event_tree.hpp"
#include "etma/model.hpp"

namespace etma {

struct PartitionQuery {
  enum class Mode { kIndices, kContainsAll, kContainsAny };

  Mode mode = Mode::kIndices;
  std::vector<std::size_t> indices;  ///< kIndices only.
  std::vector<StateLabel> events;    ///< Containment modes only.

  static PartitionQuery Indices(std::vector<std::size_t> indices) {
    return {Mode::kIndices, std::move(indices), {}};
  }
  static PartitionQuery ContainsAll(std::vector<StateLabel> events) {
    return {Mode::kContainsAll, {}, std::move(events)};
  }
  static PartitionQuery ContainsAny(std::vector<StateLabel> events) {
    return {Mode::kContainsAny, {}, std::move(events)};
  }

  friend bool operator==(const PartitionQuery&, const PartitionQuery&) = default;
};

/// Sorted, disjoint, and together covering every path index.
struct PartitionResult {
  std::vector<std::size_t> selected;
  std::vector<std::size_t> complement;
};

/// "3,5,7-10" -> {3,5,7,8,9,10}. Whitespace is ignored; throws ParseError.
std::vector<std::size_t> parse_index_ranges(std::string_view text);
/// Inverse of parse_index_ranges for display: "{3,5,7,8,9,10}".
std::string format_index_set(std::span<const std::size_t> indices);

/// Containment is syntactic: a path contains an event only if the event
/// appears literally in it. Throws ValidationError for out-of-range indices.
PartitionResult partition(std::span<const Path> paths, const PartitionQuery& query);
/// Same, additionally checking that every queried event resolves in the model.
PartitionResult partition(const EventTree& tree, const PartitionQuery& query);

/// Product of event probabilities; the empty path has probability 1.
double path_probability(const Path& path, const ProbabilityTable& table);

struct PartitionProbability {
  double selected = 0.0;
  double complement = 0.0;
};

/// Sums in ascending path index so results are bit-reproducible.
PartitionProbability partition_probability(std::span<const Path> paths,
                                           const PartitionResult& result,
                                           const ProbabilityTable& table);

double total_probability(std::span<const Path> paths, const ProbabilityTable& table);

}  // namespace etma
