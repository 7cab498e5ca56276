#include "etma/redundancy.hpp"

#include <algorithm>
#include <utility>

#include "etma/error.hpp"

namespace etma {

RedundancyResult add_parallel_redundancy(
    const SystemModel& model, std::span<const ReductionDirective> directives,
    std::string_view component_id, const std::optional<ProbabilityTable>& table) {
  const auto position = model.position(component_id);
  if (!position) {
    throw NotFoundError("unknown component '" + std::string(component_id) + "'");
  }
  const ComponentDef& original = model.components[*position];
  if (original.states.size() != 2) {
    throw UnsupportedError("redundancy requires exactly two states; '" +
                           original.id + "' has " +
                           std::to_string(original.states.size()));
  }
  const std::string first_id = original.id + "_1";
  const std::string second_id = original.id + "_2";
  for (const std::string& id : {first_id, second_id}) {
    if (model.find(id)) {
      throw ValidationError("component id '" + id + "' already exists");
    }
  }
  const std::string& success = original.states[0];
  const std::string& failure = original.states[1];

  RedundancyResult result;
  result.model.name = model.name;
  for (std::size_t i = 0; i < model.components.size(); ++i) {
    if (i != *position) {
      result.model.components.push_back(model.components[i]);
      continue;
    }
    ComponentDef first = original;
    first.id = first_id;
    ComponentDef second = original;
    second.id = second_id;
    result.model.components.push_back(std::move(first));
    result.model.components.push_back(std::move(second));
  }

  const std::vector<std::pair<std::string, std::string>> success_pairs = {
      {success, success}, {success, failure}, {failure, success}};
  const std::vector<std::pair<std::string, std::string>> failure_pairs = {
      {failure, failure}};

  auto append = [&](ReductionDirective d) {
    if (std::find(result.directives.begin(), result.directives.end(), d) ==
        result.directives.end()) {
      result.directives.push_back(std::move(d));
    }
  };

  for (const ReductionDirective& d : directives) {
    ReductionDirective base;
    for (const std::string& r : d.retain) {
      if (r == original.id) {
        base.retain.push_back(first_id);
        base.retain.push_back(second_id);
      } else {
        base.retain.push_back(r);
      }
    }
    auto hit = std::find_if(d.prefix.begin(), d.prefix.end(), [&](const StateLabel& e) {
      return e.component == original.id;
    });
    if (hit == d.prefix.end()) {
      base.prefix = d.prefix;
      append(std::move(base));
      continue;
    }
    const auto& pairs = hit->state == success ? success_pairs : failure_pairs;
    for (const auto& [first_state, second_state] : pairs) {
      ReductionDirective rewritten = base;
      rewritten.prefix.assign(d.prefix.begin(), hit);
      rewritten.prefix.push_back({first_id, first_state, std::nullopt});
      rewritten.prefix.push_back({second_id, second_state, std::nullopt});
      rewritten.prefix.insert(rewritten.prefix.end(), hit + 1, d.prefix.end());
      append(std::move(rewritten));
    }
  }
  if (*position == 0) {
    ReductionDirective truncation{{{first_id, failure, std::nullopt},
                                   {second_id, failure, std::nullopt}},
                                  {}};
    // A rewritten directive below the both-fail prefix already decides it.
    const bool decided = std::any_of(
        result.directives.begin(), result.directives.end(),
        [&](const ReductionDirective& d) {
          return d.prefix.size() >= 2 &&
                 std::equal(truncation.prefix.begin(), truncation.prefix.end(),
                            d.prefix.begin());
        });
    if (!decided) append(std::move(truncation));
  }

  if (table) {
    ProbabilityTable transformed = *table;
    for (const std::string& state : original.states) {
      if (auto p = table->find(original.id, state)) {
        transformed.set(first_id, state, *p);
        transformed.set(second_id, state, *p);
      }
    }
    transformed.erase_component(original.id);
    result.table = std::move(transformed);
  }
  return result;
}

}  // namespace etma
