#pragma once

#include <vector>

namespace causalkg {

/// Non-negative table over a sorted scope of variable ids. Entries are laid
/// out row-major with the last scope variable varying fastest.
struct Factor {
  std::vector<int> scope;  // strictly increasing variable ids
  std::vector<int> cards;  // cardinality per scope entry
  std::vector<double> table;

  static Factor unit();

  std::size_t index_of(const std::vector<int>& states) const;
  double value_at(const std::vector<int>& full_assignment) const;
};

Factor factor_product(const Factor& a, const Factor& b);

/// Sums the given variable out of the scope.
Factor factor_marginalize(const Factor& f, int variable);

/// Fixes a scope variable to one state and drops it from the scope.
Factor factor_reduce(const Factor& f, int variable, int state);

/// Total mass; 0 signals an impossible-evidence situation to callers.
double factor_total(const Factor& f);

}  // namespace causalkg
