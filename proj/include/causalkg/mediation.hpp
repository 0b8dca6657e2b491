#pragma once

#include <optional>
#include <string>
#include <vector>

#include "causalkg/inference.hpp"
#include "causalkg/model.hpp"

namespace causalkg {

/// A (treatment, outcome[, mediator]) effect question with the treatment
/// transition t0 -> t1. For binary treatments t0/t1 default to the first and
/// second declared state; otherwise they must be given.
struct EffectSpec {
  std::string treatment;
  std::string outcome;
  std::optional<std::string> mediator;
  std::optional<std::string> t0;
  std::optional<std::string> t1;
};

struct EffectReport {
  EffectSpec spec;  // with t0/t1 resolved
  double tce = 0.0;
  std::optional<double> nde;
  std::optional<double> nie;
  std::optional<double> nie_reversed;
  std::vector<double> outcome_encoding;
  std::vector<std::string> warnings;
};

/// E[outcome | do(do_set)] under the outcome's numeric state coding.
double expected_outcome(const CausalBayesianNetwork& model,
                        const std::string& outcome, const Assignment& do_set,
                        Backend backend = Backend::enumerate);

/// E[Y | do(T=t1)] - E[Y | do(T=t0)]. Exactly zero (with a warning in the
/// report forms) when the treatment is not an ancestor of the outcome.
double total_causal_effect(const CausalBayesianNetwork& model,
                           const EffectSpec& spec,
                           Backend backend = Backend::enumerate);

double natural_direct_effect(const CausalBayesianNetwork& model,
                             const EffectSpec& spec,
                             Backend backend = Backend::enumerate);

double natural_indirect_effect(const CausalBayesianNetwork& model,
                               const EffectSpec& spec,
                               Backend backend = Backend::enumerate);

/// Full report: TCE, and with a mediator NDE, NIE and the reversed NIE.
/// Pearl's decomposition TCE = NDE - NIE_reversed is verified on the way
/// out; a violation indicates an internal bug, not bad input.
EffectReport decompose(const CausalBayesianNetwork& model,
                       const EffectSpec& spec,
                       Backend backend = Backend::enumerate);

/// Expected outcome value in a two-world (twin) reading of the model:
/// world A runs under do(T=t_a), world B under do(T=t_b) with the mediator
/// forced to its world-A value; every other variable shares its exogenous
/// noise across worlds (comonotone coupling over the declared state order).
/// This is E[Y(t_b, M(t_a))] for the model's canonical structural reading.
double twin_expected_outcome(const CausalBayesianNetwork& model,
                             const std::string& treatment,
                             const std::string& t_a, const std::string& t_b,
                             const std::string& mediator,
                             const std::string& outcome,
                             Backend backend = Backend::enumerate);

/// The derived pair-state model behind twin_expected_outcome; exposed for
/// tests. Variable i of the result carries states (a, b) of original
/// variable i encoded as a * card + b, valued by the b component.
CausalBayesianNetwork twin_model(const CausalBayesianNetwork& model,
                                 const std::string& treatment,
                                 const std::string& t_a,
                                 const std::string& t_b,
                                 const std::string& mediator);

inline constexpr double kDecompositionTolerance = 1e-9;

}  // namespace causalkg
