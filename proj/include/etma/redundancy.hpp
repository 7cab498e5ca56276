#pragma once

/// @file redundancy.hpp
/// What-if transform: duplicate a two-state component as a 1-out-of-2
/// parallel pair.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "etma/model.hpp"
#include "etma/reduction.hpp"

namespace etma {

struct RedundancyResult {
  SystemModel model;
  std::vector<ReductionDirective> directives;
  std::optional<ProbabilityTable> table;
};

/// Renames component C to C_1, inserts C_2 right after it with the same
/// states, and rewrites every directive conditioned on (C, s) into one
/// directive per (C_1, C_2) state pair whose parallel outcome is s. The
/// first declared state is success; the pair fails only if both fail.
///
/// When C is the first component a truncation directive
/// [C_1 fail, C_2 fail] is added unless a rewritten directive already
/// starts with that prefix.
///
/// Throws NotFoundError for an unknown component, UnsupportedError for a
/// component without exactly two states.
RedundancyResult add_parallel_redundancy(
    const SystemModel& model, std::span<const ReductionDirective> directives,
    std::string_view component_id,
    const std::optional<ProbabilityTable>& table = std::nullopt);

}  // namespace etma
