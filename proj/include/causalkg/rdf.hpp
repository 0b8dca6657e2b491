#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace causalkg {

struct Statement;

struct Iri {
  std::string value;

  friend auto operator<=>(const Iri&, const Iri&) = default;
};

/// Typed literal; plain strings carry the xsd:string datatype.
struct Literal {
  std::string lexical;
  std::string datatype;

  friend auto operator<=>(const Literal&, const Literal&) = default;
};

/// IRI, literal, or embedded (quoted) triple. IRIs are always stored fully
/// expanded, so term equality is prefix-independent.
class Term {
 public:
  enum class Kind { iri, literal, embedded };

  Term(Iri iri);
  Term(Literal literal);
  static Term embedded(Statement inner);

  Kind kind() const { return kind_; }
  bool is_iri() const { return kind_ == Kind::iri; }
  bool is_literal() const { return kind_ == Kind::literal; }
  bool is_embedded() const { return kind_ == Kind::embedded; }

  const Iri& iri() const { return iri_; }
  const Literal& literal() const { return literal_; }
  const Statement& embedded_statement() const { return *embedded_; }

  /// Total order: IRIs before literals before embedded triples, then
  /// componentwise. Used for canonical serialization and set semantics.
  int compare(const Term& other) const;

  friend bool operator==(const Term& a, const Term& b) {
    return a.compare(b) == 0;
  }
  friend bool operator<(const Term& a, const Term& b) {
    return a.compare(b) < 0;
  }

 private:
  Term() = default;

  Kind kind_ = Kind::iri;
  Iri iri_;
  Literal literal_;
  std::shared_ptr<const Statement> embedded_;
};

struct Statement {
  Term subject;
  Iri predicate;
  Term object;

  int compare(const Statement& other) const;

  friend bool operator==(const Statement& a, const Statement& b) {
    return a.compare(b) == 0;
  }
  friend bool operator<(const Statement& a, const Statement& b) {
    return a.compare(b) < 0;
  }
};

/// xsd:double literal with the shortest decimal form that parses back to
/// the same value.
Literal double_literal(double value);
std::string format_double(double value);

/// Set of statements plus the prefix table used when serializing.
struct CausalKnowledgeGraph {
  std::set<Statement> statements;
  std::map<std::string, std::string> prefixes;  // label -> namespace IRI

  void insert(Statement statement) { statements.insert(std::move(statement)); }
  bool contains(const Statement& statement) const {
    return statements.count(statement) > 0;
  }
};

struct KgDiff {
  std::vector<Statement> only_in_a;
  std::vector<Statement> only_in_b;

  bool empty() const { return only_in_a.empty() && only_in_b.empty(); }
};

/// Statement-level symmetric difference. Terms hold expanded IRIs, so
/// differing prefix tables cannot mask or fake differences.
KgDiff kg_diff(const CausalKnowledgeGraph& a, const CausalKnowledgeGraph& b);

/// Embedded triples used as subjects that are not also asserted as base
/// statements (empty for graphs produced by the builder).
std::vector<Statement> unasserted_annotations(const CausalKnowledgeGraph& kg);

}  // namespace causalkg
