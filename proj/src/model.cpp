#include "etma/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "etma/error.hpp"

namespace etma {

std::string compact_label(const StateLabel& label) {
  return label.component + "_" + label.state;
}

const ComponentDef* SystemModel::find(std::string_view id) const {
  auto it = std::find_if(components.begin(), components.end(),
                         [&](const ComponentDef& c) { return c.id == id; });
  return it == components.end() ? nullptr : &*it;
}

std::optional<std::size_t> SystemModel::position(std::string_view id) const {
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (components[i].id == id) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> SystemModel::state_index(
    std::string_view id, std::string_view state) const {
  const ComponentDef* component = find(id);
  if (!component) return std::nullopt;
  auto it = std::find(component->states.begin(), component->states.end(), state);
  if (it == component->states.end()) return std::nullopt;
  return static_cast<std::size_t>(it - component->states.begin());
}

void ProbabilityTable::set(std::string component, std::string state, double p) {
  entries_[Key{std::move(component), std::move(state)}] = p;
}

std::optional<double> ProbabilityTable::find(std::string_view component,
                                             std::string_view state) const {
  auto it = entries_.find(Key{std::string(component), std::string(state)});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

double ProbabilityTable::at(std::string_view component,
                            std::string_view state) const {
  if (auto p = find(component, state)) return *p;
  throw NotFoundError("no probability for event " + std::string(component) +
                      "_" + std::string(state));
}

void ProbabilityTable::erase_component(std::string_view component) {
  std::erase_if(entries_, [&](const auto& kv) { return kv.first.first == component; });
}

bool ValidationReport::ok() const {
  return std::none_of(violations.begin(), violations.end(), [](const Violation& v) {
    return v.severity == Severity::kError;
  });
}

void require_valid(const ValidationReport& report) {
  for (const Violation& v : report.violations) {
    if (v.severity == Severity::kError) throw ValidationError(v.message);
  }
}

namespace {

void add(ValidationReport* report, std::string code, std::string component,
         std::string state, std::string message) {
  report->violations.push_back({Severity::kError, std::move(code),
                                std::move(component), std::move(state),
                                std::move(message)});
}

}  // namespace

ValidationReport validate_model(const SystemModel& model) {
  ValidationReport report;
  if (model.components.empty()) {
    add(&report, "empty_model", "", "", "model declares no components");
  }
  std::set<std::string> ids;
  for (const ComponentDef& c : model.components) {
    if (c.id.empty()) {
      add(&report, "empty_component_id", "", "", "component with empty id");
    } else if (!ids.insert(c.id).second) {
      add(&report, "duplicate_component", c.id, "",
          "component '" + c.id + "' declared more than once");
    }
    if (c.states.empty()) {
      add(&report, "empty_outcome_space", c.id, "",
          "component '" + c.id + "' has no states");
    }
    std::set<std::string> states;
    for (const std::string& s : c.states) {
      if (s.empty()) {
        add(&report, "empty_state_id", c.id, "",
            "component '" + c.id + "' has a state with empty id");
      } else if (!states.insert(s).second) {
        add(&report, "duplicate_state", c.id, s,
            "state '" + s + "' of component '" + c.id + "' is not distinct");
      }
    }
    if (c.failure_rate && !(std::isfinite(*c.failure_rate) && *c.failure_rate >= 0)) {
      add(&report, "invalid_failure_rate", c.id, "",
          "failure rate of '" + c.id + "' must be a finite value >= 0");
    }
  }
  report.notes.push_back(
      "completeness and mutual exclusivity of each outcome space are attested "
      "by the modeler and not machine-checked");
  return report;
}

ValidationReport validate_probabilities(const SystemModel& model,
                                        const ProbabilityTable& table) {
  ValidationReport report;
  if (!(table.tolerance() >= 0)) {
    add(&report, "invalid_tolerance", "", "", "tolerance must be >= 0");
  }
  for (const auto& [key, p] : table.entries()) {
    const auto& [component, state] = key;
    if (!model.find(component)) {
      add(&report, "unknown_component", component, state,
          "table references unknown component '" + component + "'");
      continue;
    }
    if (!model.state_index(component, state)) {
      add(&report, "unknown_state", component, state,
          "table references unknown state '" + state + "' of '" + component + "'");
      continue;
    }
    if (!(p >= 0.0 && p <= 1.0)) {
      add(&report, "out_of_range", component, state,
          "probability of " + component + "_" + state + " is outside [0,1]");
    }
  }
  for (const ComponentDef& c : model.components) {
    double sum = 0.0;
    bool complete = true;
    for (const std::string& s : c.states) {
      auto p = table.find(c.id, s);
      if (!p) {
        complete = false;
        add(&report, "missing_entry", c.id, s,
            "no probability for " + c.id + "_" + s);
        continue;
      }
      sum += *p;
    }
    if (complete && !(std::abs(sum - 1.0) <= table.tolerance())) {
      add(&report, "sum_not_one", c.id, "",
          "probabilities of '" + c.id + "' sum to " + std::to_string(sum) +
              ", not 1");
    }
  }
  return report;
}

namespace {

void check_rate_and_time(double lambda, double t) {
  if (!(lambda >= 0) || !std::isfinite(lambda)) {
    throw DomainError("failure rate must be a finite value >= 0");
  }
  if (!(t >= 0) || !std::isfinite(t)) {
    throw DomainError("time must be a finite value >= 0");
  }
}

double round_to(double value, int decimals) {
  if (decimals < 0) throw DomainError("decimal places must be >= 0");
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

}  // namespace

double exp_unreliability(double lambda, double t, std::optional<int> decimals) {
  check_rate_and_time(lambda, t);
  double f = -std::expm1(-lambda * t);
  if (decimals) f = round_to(f, *decimals);
  return std::clamp(f, 0.0, 1.0);
}

double exp_reliability(double lambda, double t, std::optional<int> decimals) {
  return 1.0 - exp_unreliability(lambda, t, decimals);
}

ProbabilityTable reliability_table(const SystemModel& model, double t,
                                   std::optional<int> decimals) {
  ProbabilityTable table;
  for (const ComponentDef& c : model.components) {
    if (!c.failure_rate) {
      throw ValidationError("component '" + c.id + "' has no failure rate");
    }
    if (c.states.size() != 2) {
      throw UnsupportedError("component '" + c.id +
                             "' must have exactly two states (success, failure)");
    }
    const double f = exp_unreliability(*c.failure_rate, t, decimals);
    table.set(c.id, c.states[0], 1.0 - f);
    table.set(c.id, c.states[1], f);
  }
  return table;
}

}  // namespace etma
