#pragma once

/// @file oracle.hpp
/// Independent cross-checks of reduced-tree probabilities.
///
/// Neither oracle looks at a reduced EventTree. The brute-force oracle
/// enumerates complete-tree outcomes, maps each to its reduced event
/// sequence by directive semantics alone, and aggregates the mass. Reduced
/// paths are numbered by sorting the sequences, which reproduces the
/// depth-first listing.

#include <cstdint>
#include <span>
#include <vector>

#include "etma/model.hpp"
#include "etma/partition.hpp"
#include "etma/reduction.hpp"

namespace etma {

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 24;

/// Directive sets applied one after another (one per reduction pass).
using ReductionStages = std::span<const std::vector<ReductionDirective>>;

/// Throws CapacityError when the complete outcome space exceeds `cap`.
double oracle_brute_force(const SystemModel& model,
                          std::span<const ReductionDirective> directives,
                          const ProbabilityTable& table, const PartitionQuery& query,
                          std::uint64_t cap = kDefaultEnumerationCap);
double oracle_brute_force(const SystemModel& model, ReductionStages stages,
                          const ProbabilityTable& table, const PartitionQuery& query,
                          std::uint64_t cap = kDefaultEnumerationCap);

/// Reduced outcome space derived from directive semantics, in listing order.
std::vector<std::vector<StateLabel>> oracle_reduced_listing(
    const SystemModel& model, ReductionStages stages,
    std::uint64_t cap = kDefaultEnumerationCap);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double half_width = 0.0;  ///< 99% normal-approximation half-width.
  std::uint64_t samples = 0;
};

/// Samples component states independently from `table`. For index queries
/// the reduced listing is taken from the engine; containment queries are
/// classified on the sampled sequence directly. (seed, n_samples) fully
/// determines the result.
MonteCarloEstimate oracle_monte_carlo(const SystemModel& model,
                                      std::span<const ReductionDirective> directives,
                                      const ProbabilityTable& table,
                                      const PartitionQuery& query,
                                      std::uint64_t n_samples, std::uint64_t seed);

}  // namespace etma
