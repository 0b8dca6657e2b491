#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "causalkg/inference.hpp"
#include "causalkg/mediation.hpp"
#include "causalkg/model.hpp"
#include "causalkg/rdf.hpp"

namespace causalkg {

/// The three rungs of the explainability ladder.
enum class Rung { associational, interventional, counterfactual };

std::string rung_label(Rung rung);

enum class EffectKind { tce, nde, nie };

struct EventTerm {
  std::string variable;
  std::string state;
};

struct AssociationalQuery {
  std::vector<EventTerm> targets;
  std::vector<EventTerm> evidence;
};

struct InterventionalQuery {
  std::vector<EventTerm> targets;
  std::vector<EventTerm> do_set;
  std::vector<EventTerm> evidence;
};

struct EffectQuery {
  EffectKind kind = EffectKind::tce;
  std::string treatment;
  std::string outcome;
  std::optional<std::string> mediator;
  std::optional<std::string> t0;
  std::optional<std::string> t1;
};

struct NecessityQuery {
  EventTerm cause;
  EventTerm outcome;
};

using QueryAst = std::variant<AssociationalQuery, InterventionalQuery,
                              EffectQuery, NecessityQuery>;

/// Grammar (whitespace-insensitive):
///   query  := prob | effect | pn
///   prob   := "P(" events ("|" conds)? ")"
///   conds  := cond ("," cond)*
///   cond   := event | "do(" events ")"
///   events := event ("," event)*
///   event  := IDENT "=" IDENT
///   effect := ("TCE"|"NDE"|"NIE") "(" IDENT "->" IDENT ("|" "via" IDENT)?
///             ("," "t0" "=" IDENT "," "t1" "=" IDENT)? ")"
///   pn     := "PN(" event "->" event ")"
/// Names are not bound here; binding happens at evaluation.
QueryAst parse_query(const std::string& text);

struct ProbabilityResult {
  std::vector<EventTerm> events;
  double probability = 0.0;
  Distribution distribution;
};

struct EffectResult {
  EffectKind kind = EffectKind::tce;
  double value = 0.0;
  EffectReport report;
};

struct IntervalResult {
  double lo = 0.0;
  double hi = 1.0;
};

struct QueryResult {
  Rung rung = Rung::associational;
  std::variant<ProbabilityResult, EffectResult, IntervalResult> value;
};

/// Evaluates a parsed query against the model. Associational queries run the
/// plain posterior, interventional ones go through graph surgery, effect
/// queries through the mediation module, and necessity questions come back
/// as Tian-Pearl bounds. The optional graph is accepted for interface
/// symmetry with explain(); evaluation itself only needs the model.
QueryResult evaluate(const QueryAst& ast, const CausalBayesianNetwork& model,
                     const CausalKnowledgeGraph* kg = nullptr,
                     Backend backend = Backend::enumerate);

/// Tian-Pearl probability-of-necessity bounds for "was cause necessary for
/// outcome". For a cause variable with more than two states the complement
/// intervention is the observational-prior mixture over the non-cause
/// states. Requires P(cause, outcome) > 0.
IntervalResult pn_bounds(const CausalBayesianNetwork& model,
                         const EventTerm& cause, const EventTerm& outcome,
                         Backend backend = Backend::enumerate);

/// Deterministic template text: names the rung, restates the question,
/// cites ckg:causes paths (and the ckg:causesWith mediator) from the graph,
/// and prints values to 4 decimals.
std::string explain(const QueryResult& result, const CausalKnowledgeGraph& kg,
                    const QueryAst& ast);

}  // namespace causalkg
