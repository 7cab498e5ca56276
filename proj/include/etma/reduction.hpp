#pragma once

/// @file reduction.hpp
/// Complete-cylinder reduction of an event tree.

#include <span>
#include <string>
#include <vector>

#include "etma/event_tree.hpp"
#include "etma/model.hpp"

namespace etma {

/// Paths under `prefix` stay conditional only on the components in
/// `retain`; every other downstream component is removed from them.
///
/// retain = [] deletes the branches below the prefix (the path ends at the
/// prefix). Omitting an interior component from `retain` deletes that node
/// while keeping its successors connected.
struct ReductionDirective {
  std::vector<StateLabel> prefix;
  std::vector<std::string> retain;

  friend bool operator==(const ReductionDirective&,
                         const ReductionDirective&) = default;
};

/// Checks each directive against the model: non-empty resolvable prefix in
/// model order, retain drawn from later components in model order. Also
/// rejects pairs where one prefix is a prefix of the other (ConflictError).
/// Identical duplicates are accepted.
void validate_directives(const SystemModel& model,
                         std::span<const ReductionDirective> directives);

/// Applies all directives in one pass. Prefixes that run into an already
/// truncated path are no-ops, so applying the same set twice is idempotent.
/// Throws NotFoundError naming the first unresolvable prefix event.
EventTree apply_reduction(const EventTree& tree,
                          std::span<const ReductionDirective> directives);

}  // namespace etma
