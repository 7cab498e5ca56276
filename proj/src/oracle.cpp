#include "etma/oracle.hpp"

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <utility>

#include "etma/error.hpp"
#include "etma/event_tree.hpp"

namespace etma {

namespace {

// (component position, state index)
using Event = std::pair<std::size_t, std::size_t>;
using Sequence = std::vector<Event>;

struct EncodedDirective {
  Sequence prefix;
  std::vector<bool> retained;  // by component position
};

using EncodedStage = std::vector<EncodedDirective>;

Event encode(const SystemModel& model, const StateLabel& label) {
  auto position = model.position(label.component);
  auto state = model.state_index(label.component, label.state);
  if (!position || !state) {
    throw NotFoundError("unknown event " + compact_label(label));
  }
  return {*position, *state};
}

std::vector<EncodedStage> encode_stages(const SystemModel& model, ReductionStages stages) {
  std::vector<EncodedStage> encoded;
  for (const auto& stage : stages) {
    validate_directives(model, stage);
    EncodedStage out;
    for (const ReductionDirective& d : stage) {
      EncodedDirective e;
      for (const StateLabel& label : d.prefix) e.prefix.push_back(encode(model, label));
      e.retained.assign(model.components.size(), false);
      for (const std::string& r : d.retain) e.retained[*model.position(r)] = true;
      out.push_back(std::move(e));
    }
    encoded.push_back(std::move(out));
  }
  return encoded;
}

bool starts_with(const Sequence& seq, const Sequence& prefix) {
  return seq.size() >= prefix.size() &&
         std::equal(prefix.begin(), prefix.end(), seq.begin());
}

// A path under a directive's prefix keeps the prefix and the retained
// components; everything else downstream disappears.
Sequence reduce(Sequence seq, const std::vector<EncodedStage>& stages) {
  for (const EncodedStage& stage : stages) {
    for (const EncodedDirective& d : stage) {
      if (!starts_with(seq, d.prefix)) continue;
      Sequence out = d.prefix;
      for (std::size_t i = d.prefix.size(); i < seq.size(); ++i) {
        if (d.retained[seq[i].first]) out.push_back(seq[i]);
      }
      seq = std::move(out);
      break;
    }
  }
  return seq;
}

std::vector<std::vector<double>> probability_matrix(const SystemModel& model,
                                                    const ProbabilityTable& table) {
  std::vector<std::vector<double>> probs;
  for (const ComponentDef& c : model.components) {
    std::vector<double> row;
    for (const std::string& s : c.states) row.push_back(table.at(c.id, s));
    probs.push_back(std::move(row));
  }
  return probs;
}

std::uint64_t outcome_count(const SystemModel& model, std::uint64_t cap) {
  std::uint64_t count = 1;
  for (const ComponentDef& c : model.components) {
    if (c.states.empty()) throw DomainError("component '" + c.id + "' has no states");
    if (count > cap / c.states.size()) {
      throw CapacityError("complete outcome space of '" + model.name +
                          "' exceeds the enumeration cap of " + std::to_string(cap));
    }
    count *= c.states.size();
  }
  return count;
}

// Visits every complete outcome in mixed-radix order with its probability.
template <typename Visit>
void for_each_outcome(const SystemModel& model, std::uint64_t cap,
                      const std::vector<std::vector<double>>* probs, Visit&& visit) {
  if (model.components.empty()) throw DomainError("model has no components");
  const std::uint64_t count = outcome_count(model, cap);
  const std::size_t n = model.components.size();
  std::vector<std::size_t> digits(n, 0);
  Sequence seq(n);
  for (std::uint64_t k = 0; k < count; ++k) {
    double p = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      seq[i] = {i, digits[i]};
      if (probs) p *= (*probs)[i][digits[i]];
    }
    visit(seq, p);
    for (std::size_t i = n; i-- > 0;) {
      if (++digits[i] < model.components[i].states.size()) break;
      digits[i] = 0;
    }
  }
}

bool contains(const Sequence& seq, const Event& event) {
  return std::find(seq.begin(), seq.end(), event) != seq.end();
}

bool matches(const Sequence& seq, const PartitionQuery& query, const Sequence& events) {
  if (query.mode == PartitionQuery::Mode::kContainsAll) {
    return std::all_of(events.begin(), events.end(),
                       [&](const Event& e) { return contains(seq, e); });
  }
  return std::any_of(events.begin(), events.end(),
                     [&](const Event& e) { return contains(seq, e); });
}

Sequence encode_events(const SystemModel& model, const PartitionQuery& query) {
  Sequence events;
  for (const StateLabel& label : query.events) events.push_back(encode(model, label));
  return events;
}

std::vector<StateLabel> decode(const SystemModel& model, const Sequence& seq) {
  std::vector<StateLabel> labels;
  for (const auto& [position, state] : seq) {
    const ComponentDef& c = model.components[position];
    labels.push_back({c.id, c.states[state], std::nullopt});
  }
  return labels;
}

}  // namespace

double oracle_brute_force(const SystemModel& model,
                          std::span<const ReductionDirective> directives,
                          const ProbabilityTable& table, const PartitionQuery& query,
                          std::uint64_t cap) {
  const std::vector<std::vector<ReductionDirective>> stages{
      {directives.begin(), directives.end()}};
  return oracle_brute_force(model, stages, table, query, cap);
}

double oracle_brute_force(const SystemModel& model, ReductionStages stages,
                          const ProbabilityTable& table, const PartitionQuery& query,
                          std::uint64_t cap) {
  const auto encoded = encode_stages(model, stages);
  const auto probs = probability_matrix(model, table);
  std::map<Sequence, double> mass;
  for_each_outcome(model, cap, &probs, [&](const Sequence& seq, double p) {
    mass[reduce(seq, encoded)] += p;
  });

  std::vector<bool> selected(mass.size(), false);
  if (query.mode == PartitionQuery::Mode::kIndices) {
    for (std::size_t index : query.indices) {
      if (index >= mass.size()) {
        throw ValidationError("path index " + std::to_string(index) + " out of range (" +
                              std::to_string(mass.size()) + " paths)");
      }
      selected[index] = true;
    }
  } else {
    const Sequence events = encode_events(model, query);
    std::size_t i = 0;
    for (const auto& [seq, p] : mass) selected[i++] = matches(seq, query, events);
  }
  double total = 0.0;
  std::size_t i = 0;
  for (const auto& [seq, p] : mass) {
    if (selected[i++]) total += p;
  }
  return total;
}

std::vector<std::vector<StateLabel>> oracle_reduced_listing(const SystemModel& model,
                                                            ReductionStages stages,
                                                            std::uint64_t cap) {
  const auto encoded = encode_stages(model, stages);
  std::set<Sequence> reduced;
  for_each_outcome(model, cap, nullptr, [&](const Sequence& seq, double) {
    reduced.insert(reduce(seq, encoded));
  });
  std::vector<std::vector<StateLabel>> listing;
  for (const Sequence& seq : reduced) listing.push_back(decode(model, seq));
  return listing;
}

MonteCarloEstimate oracle_monte_carlo(const SystemModel& model,
                                      std::span<const ReductionDirective> directives,
                                      const ProbabilityTable& table,
                                      const PartitionQuery& query,
                                      std::uint64_t n_samples, std::uint64_t seed) {
  if (n_samples == 0) throw DomainError("Monte Carlo needs at least one sample");
  if (model.components.empty()) throw DomainError("model has no components");
  require_valid(validate_probabilities(model, table));
  const std::vector<std::vector<ReductionDirective>> stage_list{
      {directives.begin(), directives.end()}};
  const auto encoded = encode_stages(model, stage_list);
  const auto probs = probability_matrix(model, table);

  std::map<Sequence, bool> selected_by_path;
  Sequence events;
  if (query.mode == PartitionQuery::Mode::kIndices) {
    const EventTree reduced = apply_reduction(generate_complete(model), directives);
    const std::vector<Path> paths = enumerate_paths(reduced);
    const PartitionResult chosen = partition(paths, query);
    for (const Path& path : paths) {
      Sequence seq;
      for (const StateLabel& label : path.events) seq.push_back(encode(model, label));
      selected_by_path[seq] = false;
    }
    for (std::size_t index : chosen.selected) {
      Sequence seq;
      for (const StateLabel& label : paths[index].events) seq.push_back(encode(model, label));
      selected_by_path[seq] = true;
    }
  } else {
    events = encode_events(model, query);
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const std::size_t n = model.components.size();
  Sequence seq(n);
  std::uint64_t hits = 0;
  for (std::uint64_t k = 0; k < n_samples; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double u = uniform(rng);
      const auto& row = probs[i];
      std::size_t state = row.size() - 1;
      double cumulative = 0.0;
      for (std::size_t s = 0; s + 1 < row.size(); ++s) {
        cumulative += row[s];
        if (u < cumulative) {
          state = s;
          break;
        }
      }
      seq[i] = {i, state};
    }
    const Sequence reduced = reduce(seq, encoded);
    bool hit = false;
    if (query.mode == PartitionQuery::Mode::kIndices) {
      auto it = selected_by_path.find(reduced);
      if (it == selected_by_path.end()) {
        throw Error("sampled outcome has no path in the reduced tree");
      }
      hit = it->second;
    } else {
      hit = matches(reduced, query, events);
    }
    hits += hit ? 1 : 0;
  }
  constexpr double kZ99 = 2.5758293035489004;
  MonteCarloEstimate result;
  result.samples = n_samples;
  result.estimate = static_cast<double>(hits) / static_cast<double>(n_samples);
  result.half_width =
      kZ99 * std::sqrt(result.estimate * (1.0 - result.estimate) /
                       static_cast<double>(n_samples));
  return result;
}

}  // namespace etma
