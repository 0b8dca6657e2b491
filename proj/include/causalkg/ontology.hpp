#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "causalkg/model.hpp"
#include "causalkg/rdf.hpp"

namespace causalkg {

enum class CausalRole { treatment, mediator, outcome, context };

std::string role_name(CausalRole role);
std::optional<CausalRole> role_from_name(const std::string& name);

/// (treatment, outcome) pair a mediator entry mediates between.
struct PatternRef {
  std::string treatment;
  std::string outcome;
};

struct RoleEntry {
  CausalRole role = CausalRole::context;
  std::string iri;  // empty -> derived from base_iri
  std::optional<PatternRef> pattern;
};

/// Binds model variables to domain IRIs and causal roles. Variables without
/// an entry default to Context under base_iri.
struct RoleMapping {
  std::string base_iri;
  std::string prefix = "dom";  // prefix label used when serializing
  std::map<std::string, RoleEntry> entries;

  /// IRI for a variable: the explicit one, else base_iri + encoded name.
  std::string iri_for(const std::string& variable) const;
  CausalRole role_of(const std::string& variable) const;
};

RoleMapping roles_from_json(const std::string& text);
std::string roles_to_json(const RoleMapping& mapping);
RoleMapping load_roles(const std::string& path);

/// Fixed ckg vocabulary. Closed: emit_schema() declares exactly these.
namespace vocab {
inline constexpr char kCkgNs[] = "http://w3id.org/causalkg#";
inline constexpr char kRdfNs[] = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr char kRdfsNs[] = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr char kXsdNs[] = "http://www.w3.org/2001/XMLSchema#";
inline constexpr char kSchemaVersion[] = "1.0";

std::string ckg(const std::string& local);
std::string rdf_type();
std::string rdfs_class();
std::string rdf_property();
std::string xsd_double();
std::string xsd_string();

std::string treatment_class();
std::string mediator_class();
std::string outcome_class();
std::string causes();
std::string causes_with();
std::string total_causal_effect();
std::string natural_direct_effect();
std::string natural_indirect_effect();
std::string probability();
}  // namespace vocab

/// Declaration triples for the vocabulary, one per term, in a fixed order.
std::vector<Statement> emit_schema();

/// Structural checks: every mapped name is a model variable, IRIs are
/// unique, each pattern's treatment is an ancestor of its outcome, and each
/// mediator lies on a directed treatment -> mediator -> outcome path.
ValidationReport validate_roles(const CausalBayesianNetwork& model,
                                const RoleMapping& mapping);

/// base_iri + percent-encoded name. base_iri must be an absolute IRI.
std::string default_iri(const std::string& variable_name,
                        const std::string& base_iri);

/// The effect questions a mapping declares: one per mediator entry, plus a
/// TCE-only pattern for any (Treatment, Outcome) role pair no mediator
/// covers. Deterministic order.
struct DeclaredPattern {
  std::string treatment;
  std::string outcome;
  std::optional<std::string> mediator;
};
std::vector<DeclaredPattern> declared_patterns(const RoleMapping& mapping);

}  // namespace causalkg
