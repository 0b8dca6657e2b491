#pragma once

#include "causalkg/inference.hpp"
#include "causalkg/model.hpp"

namespace causalkg {

/// Result of graph surgery: every intervened variable is parentless with a
/// point-mass table on its forced state; everything else is untouched.
struct InterventionalModel {
  Assignment do_set;
  CausalBayesianNetwork model;
};

/// do-operator. The base model is copied, never mutated; applying the same
/// surgery to the result is a no-op.
InterventionalModel do_transform(const CausalBayesianNetwork& model,
                                 const Assignment& do_set);

/// P(targets | do(do_set), evidence) by truncated factorization: the query
/// runs on the surgically modified model, conditioning on the evidence.
Distribution interventional_query(const CausalBayesianNetwork& model,
                                  const std::vector<std::string>& targets,
                                  const Assignment& do_set,
                                  const Assignment& evidence = {},
                                  Backend backend = Backend::enumerate);

}  // namespace causalkg
