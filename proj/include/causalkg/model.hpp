#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "causalkg/error.hpp"

namespace causalkg {

/// A discrete variable. state_values carry the numeric outcome coding used
/// by effect computations; they default to the state index (0, 1, ...).
struct Variable {
  std::string name;
  std::vector<std::string> states;
  std::vector<double> state_values;
  std::vector<std::string> parents;

  bool exogenous() const { return parents.empty(); }
};

/// Conditional probability table. Rows are keyed by the parent state indices
/// in parent declaration order; each row is a distribution over the owner's
/// states. The map representation admits incomplete or over-complete tables
/// so that validate() can report on them.
struct Cpt {
  std::map<std::vector<int>, std::vector<double>> rows;
};

/// Variable name -> state label bindings.
using Assignment = std::map<std::string, std::string>;

struct Finding {
  std::string code;
  std::string subject;
  std::string message;
};

struct ValidationReport {
  std::vector<Finding> findings;

  bool ok() const { return findings.empty(); }
  std::string to_string() const;
};

/// Rows of state labels under a header of variable names.
struct Dataset {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

class CausalBayesianNetwork {
 public:
  CausalBayesianNetwork() = default;

  /// Appends a variable and its table. state_values default to indices when
  /// empty. Duplicate names are representable (validate() reports them).
  void add(Variable variable, Cpt cpt);

  int size() const { return static_cast<int>(variables_.size()); }
  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& variable(int index) const { return variables_.at(index); }
  const Cpt& cpt(int index) const { return cpts_.at(index); }

  /// Index of a variable by name, or -1.
  int index_of(std::string_view name) const;
  /// Index of a variable by name; throws unknown_variable.
  int require_index(std::string_view name) const;
  /// Index of a state label within a variable; throws unknown_state.
  int state_index(int variable_index, std::string_view label) const;

  int cardinality(int variable_index) const {
    return static_cast<int>(variables_.at(variable_index).states.size());
  }

  /// Parent indices of a variable; throws invalid_model on unresolved names.
  std::vector<int> parent_indices(int variable_index) const;

  /// Topological order over variable indices (declaration order among
  /// independent variables); throws invalid_model when the graph is cyclic.
  std::vector<int> topological_order() const;

  /// True when `ancestor` lies on a directed path into `descendant`.
  bool is_ancestor(int ancestor, int descendant) const;

  /// All strict descendants of a variable.
  std::vector<int> descendants(int variable_index) const;

 private:
  std::vector<Variable> variables_;
  std::vector<Cpt> cpts_;
  std::map<std::string, int, std::less<>> index_;
};

/// Checks every structural and numeric invariant; all problems come back as
/// findings, never exceptions. CPT row distributions must sum to 1 within
/// 1e-9 (unnormalized rows are a finding, not silently rescaled).
ValidationReport validate(const CausalBayesianNetwork& model);

/// Structural subset of validate(): name resolution and acyclicity only.
/// Used by fit_cpts, where the skeleton's tables are intentionally empty.
ValidationReport validate_structure(const CausalBayesianNetwork& model);

inline constexpr double kRowSumTolerance = 1e-9;

}  // namespace causalkg
