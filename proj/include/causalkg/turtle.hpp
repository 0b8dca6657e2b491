#pragma once

#include <string>

#include "causalkg/rdf.hpp"

namespace causalkg {

/// Canonical Turtle-star text: prefixes sorted by label, IRI subjects sorted
/// by expanded IRI, embedded-triple subjects after them sorted by serialized
/// form, ";"-grouped predicate lists, doubles in shortest round-trip form,
/// UTF-8 with LF endings. Serializing the same graph twice yields identical
/// bytes.
std::string serialize(const CausalKnowledgeGraph& kg);

/// Parses the Turtle-star subset:
///   doc      := (prefix | stmt)*
///   prefix   := "@prefix" PNAME_NS IRIREF "."
///   stmt     := subj polist "."
///   subj     := iri | embedded
///   embedded := "<<" subj iri obj ">>"
///   polist   := iri objlist (";" iri objlist)*
///   objlist  := obj ("," obj)*
///   obj      := iri | embedded | literal
///   literal  := STRING ("^^" iri)? | NUMBER
/// Comments run from '#' to end of line. Bare numbers normalize to
/// xsd:double literals in shortest round-trip form. Errors are SyntaxError
/// with 1-based line/column and the expected token set, or unknown_prefix.
CausalKnowledgeGraph parse(const std::string& text);

}  // namespace causalkg
