#include "causalkg/rdf.hpp"

#include <algorithm>
#include <charconv>

#include "causalkg/ontology.hpp"

namespace causalkg {

Term::Term(Iri iri) : kind_(Kind::iri), iri_(std::move(iri)) {}

Term::Term(Literal literal)
    : kind_(Kind::literal), literal_(std::move(literal)) {}

Term Term::embedded(Statement inner) {
  Term t;
  t.kind_ = Kind::embedded;
  t.embedded_ = std::make_shared<const Statement>(std::move(inner));
  return t;
}

namespace {
int compare_strings(const std::string& a, const std::string& b) {
  return a < b ? -1 : (a == b ? 0 : 1);
}
}  // namespace

int Term::compare(const Term& other) const {
  if (kind_ != other.kind_) {
    return static_cast<int>(kind_) < static_cast<int>(other.kind_) ? -1 : 1;
  }
  switch (kind_) {
    case Kind::iri:
      return compare_strings(iri_.value, other.iri_.value);
    case Kind::literal: {
      int c = compare_strings(literal_.lexical, other.literal_.lexical);
      if (c) return c;
      return compare_strings(literal_.datatype, other.literal_.datatype);
    }
    case Kind::embedded:
      return embedded_->compare(*other.embedded_);
  }
  return 0;
}

int Statement::compare(const Statement& other) const {
  int c = subject.compare(other.subject);
  if (c) return c;
  c = compare_strings(predicate.value, other.predicate.value);
  if (c) return c;
  return object.compare(other.object);
}

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

Literal double_literal(double value) {
  return Literal{format_double(value), vocab::xsd_double()};
}

KgDiff kg_diff(const CausalKnowledgeGraph& a, const CausalKnowledgeGraph& b) {
  KgDiff diff;
  std::set_difference(a.statements.begin(), a.statements.end(),
                      b.statements.begin(), b.statements.end(),
                      std::back_inserter(diff.only_in_a));
  std::set_difference(b.statements.begin(), b.statements.end(),
                      a.statements.begin(), a.statements.end(),
                      std::back_inserter(diff.only_in_b));
  return diff;
}

std::vector<Statement> unasserted_annotations(const CausalKnowledgeGraph& kg) {
  std::vector<Statement> missing;
  auto check = [&](auto&& self, const Term& term) -> void {
    if (!term.is_embedded()) return;
    const Statement& inner = term.embedded_statement();
    if (!kg.contains(inner)) missing.push_back(inner);
    self(self, inner.subject);
    self(self, inner.object);
  };
  for (const auto& st : kg.statements) {
    check(check, st.subject);
    check(check, st.object);
  }
  return missing;
}

}  // namespace causalkg
