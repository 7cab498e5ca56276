#pragma once

/// @file model.hpp
/// Declarative system model, probability tables and their validation.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace etma {

/// One outcome of one component, e.g. (CT, F).
struct StateLabel {
  std::string component;
  std::string state;
  std::optional<std::string> display;

  friend bool operator==(const StateLabel&, const StateLabel&) = default;
};

/// "CT_F" form used in path listings and error messages.
std::string compact_label(const StateLabel& label);

struct ComponentDef {
  std::string id;
  std::vector<std::string> states;      ///< Outcome space in declared order.
  std::optional<double> failure_rate;   ///< Failures per year.

  friend bool operator==(const ComponentDef&, const ComponentDef&) = default;
};

/// Ordered list of components. Declared order is the node order of every
/// tree generated from the model.
struct SystemModel {
  std::string name;
  std::vector<ComponentDef> components;

  const ComponentDef* find(std::string_view id) const;
  std::optional<std::size_t> position(std::string_view id) const;
  /// Index of `state` within the outcome space of component `id`.
  std::optional<std::size_t> state_index(std::string_view id,
                                         std::string_view state) const;
  bool resolves(const StateLabel& label) const {
    return state_index(label.component, label.state).has_value();
  }

  friend bool operator==(const SystemModel&, const SystemModel&) = default;
};

/// Per component, per state probability.
class ProbabilityTable {
 public:
  using Key = std::pair<std::string, std::string>;
  static constexpr double kDefaultTolerance = 1e-9;

  ProbabilityTable() = default;
  explicit ProbabilityTable(double tolerance) : tolerance_(tolerance) {}

  void set(std::string component, std::string state, double p);
  std::optional<double> find(std::string_view component,
                             std::string_view state) const;
  /// Throws NotFoundError naming the missing event.
  double at(std::string_view component, std::string_view state) const;
  void erase_component(std::string_view component);

  const std::map<Key, double>& entries() const { return entries_; }
  double tolerance() const { return tolerance_; }
  void set_tolerance(double tolerance) { tolerance_ = tolerance; }

  friend bool operator==(const ProbabilityTable&,
                         const ProbabilityTable&) = default;

 private:
  std::map<Key, double> entries_;
  double tolerance_ = kDefaultTolerance;
};

enum class Severity { kError, kWarning };

struct Violation {
  Severity severity = Severity::kError;
  std::string code;       ///< Machine-readable, e.g. "duplicate_state".
  std::string component;  ///< Empty when not applicable.
  std::string state;
  std::string message;
};

/// Violations are data. An empty `violations` list means valid; `notes`
/// carries obligations the modeler must attest to that cannot be checked.
struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<std::string> notes;

  bool ok() const;
  bool empty() const { return violations.empty(); }
};

ValidationReport validate_model(const SystemModel& model);
ValidationReport validate_probabilities(const SystemModel& model,
                                        const ProbabilityTable& table);

/// Throws ValidationError carrying the first error-level violation.
void require_valid(const ValidationReport& report);

/// F(t) = 1 - exp(-lambda t). With `decimals`, the result is rounded to that
/// many decimal places.
double exp_unreliability(double lambda, double t,
                         std::optional<int> decimals = std::nullopt);
/// R(t) = 1 - F(t), computed from the (possibly rounded) unreliability.
double exp_reliability(double lambda, double t,
                       std::optional<int> decimals = std::nullopt);

/// Builds a table from failure rates for two-state components: the first
/// declared state gets R(t), the second F(t).
ProbabilityTable reliability_table(const SystemModel& model, double t,
                                   std::optional<int> decimals = std::nullopt);

}  // namespace etma
