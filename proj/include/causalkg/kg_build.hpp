#pragma once

#include <vector>

#include "causalkg/mediation.hpp"
#include "causalkg/model.hpp"
#include "causalkg/ontology.hpp"
#include "causalkg/rdf.hpp"

namespace causalkg {

/// Assembles the hyper-relational causal graph:
///  - the vocabulary declarations from emit_schema(),
///  - one ckg:causes statement per DAG edge,
///  - rdf:type statements for Treatment/Mediator/Outcome roles,
///  - ckg:probability of each node's last-listed state marginal,
///  - per effect report, annotations on the embedded (treatment, outcome)
///    triple: ckg:totalCausalEffect, and with a mediator ckg:causesWith plus
///    ckg:naturalDirectEffect / ckg:naturalIndirectEffect.
/// Annotated triples are also asserted as base statements, even when the
/// (treatment, outcome) relation has no direct DAG edge.
CausalKnowledgeGraph build_kg(const CausalBayesianNetwork& model,
                              const RoleMapping& mapping,
                              const std::vector<EffectReport>& reports);

/// Numeric annotations are rounded to 12 significant digits before they
/// become literals, shedding summation roundoff while staying far inside
/// the graph's 1e-9 annotation tolerance.
double annotation_value(double value);

}  // namespace causalkg
