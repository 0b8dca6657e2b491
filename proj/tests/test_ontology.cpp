#include <doctest.h>

#include <random>
#include <set>

#include "causalkg/collision.hpp"
#include "causalkg/ontology.hpp"
#include "causalkg/turtle.hpp"
#include "support/random_models.hpp"

using namespace causalkg;

TEST_CASE("schema declares the closed vocabulary") {
  auto schema = emit_schema();
  CHECK(schema.size() == 9);

  bool has_causes_with = false;
  for (const auto& st : schema) {
    CHECK(st.predicate.value == vocab::rdf_type());
    if (st.subject.is_iri() &&
        st.subject.iri().value == vocab::causes_with()) {
      has_causes_with = true;
      CHECK(st.object.iri().value == vocab::rdf_property());
    }
  }
  CHECK(has_causes_with);

  // deterministic, and serializable through the turtle layer without loss
  auto again = emit_schema();
  REQUIRE(again.size() == schema.size());
  for (std::size_t i = 0; i < schema.size(); ++i) {
    CHECK(schema[i] == again[i]);
  }
  CausalKnowledgeGraph kg;
  kg.prefixes["ckg"] = vocab::kCkgNs;
  kg.prefixes["rdf"] = vocab::kRdfNs;
  kg.prefixes["rdfs"] = vocab::kRdfsNs;
  for (auto& st : schema) kg.insert(st);
  auto back = parse(serialize(kg));
  CHECK(kg_diff(kg, back).empty());
}

TEST_CASE("default IRIs") {
  CHECK(default_iri("Collision", "http://ex.org/ad#") ==
        "http://ex.org/ad#Collision");
  CHECK(default_iri("lane change", "http://ex.org/ad#") ==
        "http://ex.org/ad#lane%20change");
  CHECK_THROWS_AS(default_iri("Collision", "ad#"), Error);
  try {
    default_iri("x", "no scheme here");
    FAIL("expected invalid_base_iri");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_base_iri);
  }
}

TEST_CASE("fixture role mapping validates cleanly") {
  auto m = collision_fixture();
  auto report = validate_roles(m, collision_roles());
  CHECK(report.ok());
}

TEST_CASE("empty mapping validates; everything defaults to Context") {
  auto m = collision_fixture();
  RoleMapping empty;
  empty.base_iri = "http://ex.org/ad#";
  CHECK(validate_roles(m, empty).ok());
  CHECK(empty.role_of("Snow") == CausalRole::context);
  CHECK(empty.iri_for("Snow") == "http://ex.org/ad#Snow");
}

TEST_CASE("mediator off the treatment-outcome path is a finding") {
  auto m = collision_fixture();
  auto mapping = collision_roles();
  mapping.entries["Snow"] =
      RoleEntry{CausalRole::mediator, "",
                PatternRef{"DriverDistraction", "Collision"}};
  auto report = validate_roles(m, mapping);
  REQUIRE_FALSE(report.ok());
  bool found = false;
  for (const auto& f : report.findings) {
    if (f.code == "mediator-not-on-path" && f.subject == "Snow") found = true;
  }
  CHECK(found);
}

TEST_CASE("other role findings") {
  auto m = collision_fixture();
  SUBCASE("unknown variable") {
    auto mapping = collision_roles();
    mapping.entries["Ghost"] = RoleEntry{CausalRole::context, "", std::nullopt};
    auto report = validate_roles(m, mapping);
    REQUIRE_FALSE(report.ok());
    CHECK(report.findings[0].code == "unknown-variable");
  }
  SUBCASE("duplicate IRI") {
    auto mapping = collision_roles();
    mapping.entries["Snow"] =
        RoleEntry{CausalRole::context, "http://ex.org/x", std::nullopt};
    mapping.entries["Rain"] =
        RoleEntry{CausalRole::context, "http://ex.org/x", std::nullopt};
    auto report = validate_roles(m, mapping);
    bool found = false;
    for (const auto& f : report.findings) found |= f.code == "duplicate-iri";
    CHECK(found);
  }
  SUBCASE("treatment not an ancestor of its outcome") {
    RoleMapping mapping;
    mapping.base_iri = "http://ex.org/ad#";
    mapping.entries["Collision"] =
        RoleEntry{CausalRole::mediator, "",
                  PatternRef{"SuddenLaneChange", "Snow"}};
    auto report = validate_roles(m, mapping);
    bool found = false;
    for (const auto& f : report.findings) {
      found |= f.code == "treatment-not-ancestor";
    }
    CHECK(found);
  }
  SUBCASE("mediator without a pattern") {
    RoleMapping mapping;
    mapping.base_iri = "http://ex.org/ad#";
    mapping.entries["SuddenLaneChange"] =
        RoleEntry{CausalRole::mediator, "", std::nullopt};
    auto report = validate_roles(m, mapping);
    REQUIRE_FALSE(report.ok());
    CHECK(report.findings[0].code == "mediator-pattern");
  }
}

TEST_CASE("declared patterns") {
  auto mapping = collision_roles();
  auto patterns = declared_patterns(mapping);
  REQUIRE(patterns.size() == 1);
  CHECK(patterns[0].treatment == "DriverDistraction");
  CHECK(patterns[0].outcome == "Collision");
  CHECK(patterns[0].mediator == "SuddenLaneChange");

  // a (Treatment, Outcome) pair with no covering mediator adds a TCE-only
  // pattern
  mapping.entries["SlipperyRoad"] =
      RoleEntry{CausalRole::treatment, "", std::nullopt};
  patterns = declared_patterns(mapping);
  REQUIRE(patterns.size() == 2);
  CHECK(patterns[1].treatment == "SlipperyRoad");
  CHECK(patterns[1].outcome == "Collision");
  CHECK_FALSE(patterns[1].mediator.has_value());
}

TEST_CASE("roles JSON round trip") {
  auto mapping = collision_roles();
  auto text = roles_to_json(mapping);
  auto back = roles_from_json(text);
  CHECK(back.base_iri == mapping.base_iri);
  CHECK(back.prefix == "ad");
  CHECK(back.entries.size() == mapping.entries.size());
  CHECK(back.entries.at("SuddenLaneChange").role == CausalRole::mediator);
  CHECK(back.entries.at("SuddenLaneChange").pattern->outcome == "Collision");
  CHECK(roles_to_json(back) == text);
}

TEST_CASE("roles JSON rejects unknown roles") {
  try {
    roles_from_json(R"({"base_iri": "http://x#",
                        "roles": {"A": {"role": "Banana"}}})");
    FAIL("expected format error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::format);
  }
}

TEST_CASE("role validation agrees with brute-force reachability") {
  // independent reachability: BFS over the raw parent lists
  auto reaches = [](const CausalBayesianNetwork& m, int from, int to) {
    std::vector<int> stack{from};
    std::set<int> seen{from};
    while (!stack.empty()) {
      int at = stack.back();
      stack.pop_back();
      for (int v = 0; v < m.size(); ++v) {
        for (int p : m.parent_indices(v)) {
          if (p == at && !seen.count(v)) {
            if (v == to) return true;
            seen.insert(v);
            stack.push_back(v);
          }
        }
      }
    }
    return false;
  };

  std::mt19937_64 rng(73);
  int agreements = 0;
  for (int round = 0; round < 60; ++round) {
    int n = 3 + static_cast<int>(rng() % 3);
    auto m = testsupport::random_model(rng, n, 0.5);
    int t = static_cast<int>(rng() % n);
    int mm = static_cast<int>(rng() % n);
    int y = static_cast<int>(rng() % n);
    if (t == mm || mm == y || t == y) continue;
    auto name = [](int i) { return "V" + std::to_string(i); };

    RoleMapping mapping;
    mapping.base_iri = "http://ex.org/r#";
    mapping.entries[name(t)] = RoleEntry{CausalRole::treatment, "", std::nullopt};
    mapping.entries[name(y)] = RoleEntry{CausalRole::outcome, "", std::nullopt};
    mapping.entries[name(mm)] =
        RoleEntry{CausalRole::mediator, "", PatternRef{name(t), name(y)}};

    auto report = validate_roles(m, mapping);
    bool t_reaches_y = reaches(m, t, y);
    bool on_path = reaches(m, t, mm) && reaches(m, mm, y);
    bool found_ancestor_finding = false, found_path_finding = false;
    for (const auto& f : report.findings) {
      found_ancestor_finding |= f.code == "treatment-not-ancestor";
      found_path_finding |= f.code == "mediator-not-on-path";
    }
    CHECK(found_ancestor_finding == !t_reaches_y);
    CHECK(found_path_finding == !on_path);
    ++agreements;
  }
  CHECK(agreements > 20);
}
