#include "causalkg/kg_build.hpp"

#include <cmath>

#include "causalkg/inference.hpp"

namespace causalkg {

double annotation_value(double value) {
  if (value == 0.0 || !std::isfinite(value)) return value;
  double scale =
      std::pow(10.0, 11 - std::floor(std::log10(std::abs(value))));
  return std::round(value * scale) / scale;
}

CausalKnowledgeGraph build_kg(const CausalBayesianNetwork& model,
                              const RoleMapping& mapping,
                              const std::vector<EffectReport>& reports) {
  CausalKnowledgeGraph kg;
  kg.prefixes["ckg"] = vocab::kCkgNs;
  kg.prefixes["rdf"] = vocab::kRdfNs;
  kg.prefixes["rdfs"] = vocab::kRdfsNs;
  kg.prefixes["xsd"] = vocab::kXsdNs;
  if (!mapping.base_iri.empty()) {
    kg.prefixes[mapping.prefix] = mapping.base_iri;
  }

  auto iri_of = [&](const std::string& variable) {
    if (model.index_of(variable) < 0) {
      throw Error(ErrorKind::unmapped_variable,
                  "effect report references variable '" + variable +
                      "' which the model does not declare");
    }
    return Iri{mapping.iri_for(variable)};
  };

  for (auto& st : emit_schema()) kg.insert(std::move(st));

  for (int v = 0; v < model.size(); ++v) {
    const Variable& var = model.variable(v);
    for (const auto& parent : var.parents) {
      kg.insert(Statement{Term(iri_of(parent)), Iri{vocab::causes()},
                          Term(iri_of(var.name))});
    }

    CausalRole role = mapping.role_of(var.name);
    if (role != CausalRole::context) {
      std::string cls = role == CausalRole::treatment ? vocab::treatment_class()
                        : role == CausalRole::mediator ? vocab::mediator_class()
                                                       : vocab::outcome_class();
      kg.insert(Statement{Term(iri_of(var.name)), Iri{vocab::rdf_type()},
                          Term(Iri{cls})});
    }

    // node annotation: marginal of the last-listed ("active") state
    Distribution marginal = query_enumerate(model, {var.name});
    double p = marginal.probabilities.back();
    kg.insert(Statement{Term(iri_of(var.name)), Iri{vocab::probability()},
                        Term(double_literal(annotation_value(p)))});
  }

  for (const auto& report : reports) {
    Statement base{Term(iri_of(report.spec.treatment)), Iri{vocab::causes()},
                   Term(iri_of(report.spec.outcome))};
    kg.insert(base);  // asserted-annotation convention
    Term quoted = Term::embedded(base);
    kg.insert(Statement{quoted, Iri{vocab::total_causal_effect()},
                        Term(double_literal(annotation_value(report.tce)))});
    if (report.spec.mediator) {
      kg.insert(Statement{quoted, Iri{vocab::causes_with()},
                          Term(iri_of(*report.spec.mediator))});
      if (report.nde) {
        kg.insert(Statement{quoted, Iri{vocab::natural_direct_effect()},
                            Term(double_literal(annotation_value(*report.nde)))});
      }
      if (report.nie) {
        kg.insert(Statement{quoted, Iri{vocab::natural_indirect_effect()},
                            Term(double_literal(annotation_value(*report.nie)))});
      }
    }
  }
  return kg;
}

}  // namespace causalkg
