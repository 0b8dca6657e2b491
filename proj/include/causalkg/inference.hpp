#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "causalkg/model.hpp"

namespace causalkg {

enum class Backend { enumerate, variable_elimination };

/// Joint posterior over the target variables, row-major with the last
/// target varying fastest. Normalized to sum to 1.
struct Distribution {
  std::vector<std::string> variables;
  std::vector<std::vector<std::string>> state_labels;
  std::vector<double> probabilities;

  /// Probability of one joint state given by labels; the assignment must
  /// bind every distribution variable.
  double probability_of(const Assignment& bindings) const;
  std::size_t index_of(const std::vector<int>& states) const;
};

/// Product of the CPT entries selected by a full assignment.
double joint_probability(const CausalBayesianNetwork& model,
                         const Assignment& assignment);

/// Exact posterior by exhaustive summation over all completions. This is the
/// reference backend; query_ve must agree with it elementwise.
Distribution query_enumerate(const CausalBayesianNetwork& model,
                             const std::vector<std::string>& targets,
                             const Assignment& evidence = {});

/// Exact posterior by variable elimination (min-degree order on the
/// moralized graph). Identical contract to query_enumerate.
Distribution query_ve(const CausalBayesianNetwork& model,
                      const std::vector<std::string>& targets,
                      const Assignment& evidence = {});

Distribution query(const CausalBayesianNetwork& model,
                   const std::vector<std::string>& targets,
                   const Assignment& evidence, Backend backend);

/// Ancestral sampling; deterministic for a given seed.
Dataset sample(const CausalBayesianNetwork& model, std::size_t n,
               std::uint64_t seed);

/// Maximum-likelihood CPT estimation with additive (Laplace) smoothing:
/// each row entry is (count + alpha) / (row_total + alpha * cardinality).
CausalBayesianNetwork fit_cpts(const CausalBayesianNetwork& skeleton,
                               const Dataset& data, double alpha = 1.0);

namespace detail {

/// Index-resolved view of a model built once per operation. Tables are flat:
/// tables[v][row * card + state] with rows keyed by mixed-radix parent
/// states (first parent most significant).
struct CompiledModel {
  const CausalBayesianNetwork* model;
  std::vector<std::vector<int>> parents;
  std::vector<int> cards;
  std::vector<std::vector<double>> tables;
  std::vector<int> topo_order;

  std::size_t row_of(int variable, const std::vector<int>& full) const;
  double prob(int variable, const std::vector<int>& full, int state) const;
};

CompiledModel compile(const CausalBayesianNetwork& model);

std::vector<int> resolve_evidence(const CausalBayesianNetwork& model,
                                  const Assignment& evidence);

}  // namespace detail

}  // namespace causalkg
