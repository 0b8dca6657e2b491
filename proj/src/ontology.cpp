#include "causalkg/ontology.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "causalkg/model_json.hpp"

namespace causalkg {

std::string role_name(CausalRole role) {
  switch (role) {
    case CausalRole::treatment: return "Treatment";
    case CausalRole::mediator: return "Mediator";
    case CausalRole::outcome: return "Outcome";
    case CausalRole::context: return "Context";
  }
  return "Context";
}

std::optional<CausalRole> role_from_name(const std::string& name) {
  if (name == "Treatment") return CausalRole::treatment;
  if (name == "Mediator") return CausalRole::mediator;
  if (name == "Outcome") return CausalRole::outcome;
  if (name == "Context") return CausalRole::context;
  return std::nullopt;
}

std::string RoleMapping::iri_for(const std::string& variable) const {
  auto it = entries.find(variable);
  if (it != entries.end() && !it->second.iri.empty()) return it->second.iri;
  return default_iri(variable, base_iri);
}

CausalRole RoleMapping::role_of(const std::string& variable) const {
  auto it = entries.find(variable);
  return it == entries.end() ? CausalRole::context : it->second.role;
}

namespace vocab {

std::string ckg(const std::string& local) { return std::string(kCkgNs) + local; }
std::string rdf_type() { return std::string(kRdfNs) + "type"; }
std::string rdfs_class() { return std::string(kRdfsNs) + "Class"; }
std::string rdf_property() { return std::string(kRdfNs) + "Property"; }
std::string xsd_double() { return std::string(kXsdNs) + "double"; }
std::string xsd_string() { return std::string(kXsdNs) + "string"; }

std::string treatment_class() { return ckg("Treatment"); }
std::string mediator_class() { return ckg("Mediator"); }
std::string outcome_class() { return ckg("Outcome"); }
std::string causes() { return ckg("causes"); }
std::string causes_with() { return ckg("causesWith"); }
std::string total_causal_effect() { return ckg("totalCausalEffect"); }
std::string natural_direct_effect() { return ckg("naturalDirectEffect"); }
std::string natural_indirect_effect() { return ckg("naturalIndirectEffect"); }
std::string probability() { return ckg("probability"); }

}  // namespace vocab

std::vector<Statement> emit_schema() {
  std::vector<Statement> out;
  auto declare = [&out](const std::string& term, const std::string& kind) {
    out.push_back(Statement{Term(Iri{term}), Iri{vocab::rdf_type()},
                            Term(Iri{kind})});
  };
  declare(vocab::treatment_class(), vocab::rdfs_class());
  declare(vocab::mediator_class(), vocab::rdfs_class());
  declare(vocab::outcome_class(), vocab::rdfs_class());
  declare(vocab::causes(), vocab::rdf_property());
  declare(vocab::causes_with(), vocab::rdf_property());
  declare(vocab::total_causal_effect(), vocab::rdf_property());
  declare(vocab::natural_direct_effect(), vocab::rdf_property());
  declare(vocab::natural_indirect_effect(), vocab::rdf_property());
  declare(vocab::probability(), vocab::rdf_property());
  return out;
}

namespace {

bool is_absolute_iri(const std::string& iri) {
  // scheme ":" per RFC 3986: ALPHA (ALPHA / DIGIT / "+" / "-" / ".")* ":"
  std::size_t colon = iri.find(':');
  if (colon == std::string::npos || colon == 0) return false;
  if (!std::isalpha(static_cast<unsigned char>(iri[0]))) return false;
  for (std::size_t i = 1; i < colon; ++i) {
    unsigned char c = iri[i];
    if (!std::isalnum(c) && c != '+' && c != '-' && c != '.') return false;
  }
  return true;
}

void add_finding(ValidationReport& report, std::string code,
                 std::string subject, std::string message) {
  report.findings.push_back(
      {std::move(code), std::move(subject), std::move(message)});
}

}  // namespace

std::string default_iri(const std::string& variable_name,
                        const std::string& base_iri) {
  if (!is_absolute_iri(base_iri)) {
    throw Error(ErrorKind::invalid_base_iri,
                "base IRI is not absolute: " + base_iri);
  }
  static const char hex[] = "0123456789ABCDEF";
  std::string out = base_iri;
  for (unsigned char c : variable_name) {
    bool unreserved = std::isalnum(c) || c == '-' || c == '.' || c == '_' ||
                      c == '~';
    if (unreserved) {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 0xF];
    }
  }
  return out;
}

ValidationReport validate_roles(const CausalBayesianNetwork& model,
                                const RoleMapping& mapping) {
  ValidationReport report;

  std::map<std::string, std::string> iri_owner;
  for (const auto& [name, entry] : mapping.entries) {
    if (model.index_of(name) < 0) {
      add_finding(report, "unknown-variable", name,
                  "role mapping names a variable the model does not declare");
      continue;
    }
    std::string iri = mapping.iri_for(name);
    auto [it, inserted] = iri_owner.emplace(iri, name);
    if (!inserted) {
      add_finding(report, "duplicate-iri", name,
                  "IRI " + iri + " already bound to variable " + it->second);
    }
    if (entry.role == CausalRole::mediator && !entry.pattern) {
      add_finding(report, "mediator-pattern", name,
                  "mediator entry must declare its (treatment, outcome) "
                  "pattern");
    }
  }

  for (const auto& pattern : declared_patterns(mapping)) {
    int t = model.index_of(pattern.treatment);
    int o = model.index_of(pattern.outcome);
    if (t < 0) {
      add_finding(report, "pattern-unknown-variable", pattern.treatment,
                  "pattern treatment is not a model variable");
      continue;
    }
    if (o < 0) {
      add_finding(report, "pattern-unknown-variable", pattern.outcome,
                  "pattern outcome is not a model variable");
      continue;
    }
    if (!model.is_ancestor(t, o)) {
      add_finding(report, "treatment-not-ancestor", pattern.treatment,
                  "treatment " + pattern.treatment +
                      " is not an ancestor of outcome " + pattern.outcome);
    }
    if (pattern.mediator) {
      int m = model.index_of(*pattern.mediator);
      if (m < 0) {
        add_finding(report, "pattern-unknown-variable", *pattern.mediator,
                    "pattern mediator is not a model variable");
        continue;
      }
      if (!(model.is_ancestor(t, m) && model.is_ancestor(m, o))) {
        add_finding(report, "mediator-not-on-path", *pattern.mediator,
                    "mediator " + *pattern.mediator +
                        " is not on a directed path from " +
                        pattern.treatment + " to " + pattern.outcome);
      }
    }
  }
  return report;
}

std::vector<DeclaredPattern> declared_patterns(const RoleMapping& mapping) {
  std::vector<DeclaredPattern> out;
  std::set<std::pair<std::string, std::string>> covered;
  for (const auto& [name, entry] : mapping.entries) {
    if (entry.role == CausalRole::mediator && entry.pattern) {
      out.push_back(
          {entry.pattern->treatment, entry.pattern->outcome, name});
      covered.emplace(entry.pattern->treatment, entry.pattern->outcome);
    }
  }
  // TCE-only pattern for role-declared pairs no mediator covers
  for (const auto& [t_name, t_entry] : mapping.entries) {
    if (t_entry.role != CausalRole::treatment) continue;
    for (const auto& [o_name, o_entry] : mapping.entries) {
      if (o_entry.role != CausalRole::outcome) continue;
      if (!covered.count({t_name, o_name})) {
        out.push_back({t_name, o_name, std::nullopt});
      }
    }
  }
  return out;
}

RoleMapping roles_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::format,
                std::string("invalid roles JSON: ") + e.what());
  }
  try {
    RoleMapping mapping;
    mapping.base_iri = doc.at("base_iri").get<std::string>();
    if (doc.contains("prefix")) {
      mapping.prefix = doc["prefix"].get<std::string>();
    }
    if (doc.contains("roles")) {
      for (const auto& [name, body] : doc["roles"].items()) {
        RoleEntry entry;
        std::string role = body.at("role").get<std::string>();
        auto parsed = role_from_name(role);
        if (!parsed) {
          throw Error(ErrorKind::format, "unknown role '" + role +
                                             "' for variable " + name);
        }
        entry.role = *parsed;
        if (body.contains("iri")) {
          entry.iri = body["iri"].get<std::string>();
        }
        if (body.contains("pattern")) {
          entry.pattern = PatternRef{
              body["pattern"].at("treatment").get<std::string>(),
              body["pattern"].at("outcome").get<std::string>()};
        }
        mapping.entries.emplace(name, std::move(entry));
      }
    }
    return mapping;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::format,
                std::string("invalid roles JSON: ") + e.what());
  }
}

std::string roles_to_json(const RoleMapping& mapping) {
  nlohmann::ordered_json doc;
  doc["base_iri"] = mapping.base_iri;
  doc["prefix"] = mapping.prefix;
  nlohmann::ordered_json roles = nlohmann::ordered_json::object();
  for (const auto& [name, entry] : mapping.entries) {
    nlohmann::ordered_json body;
    body["role"] = role_name(entry.role);
    if (!entry.iri.empty()) body["iri"] = entry.iri;
    if (entry.pattern) {
      body["pattern"] = {{"treatment", entry.pattern->treatment},
                         {"outcome", entry.pattern->outcome}};
    }
    roles[name] = body;
  }
  doc["roles"] = roles;
  return doc.dump(2) + "\n";
}

RoleMapping load_roles(const std::string& path) {
  return roles_from_json(read_file(path));
}

}  // namespace causalkg
