#include <doctest.h>

#include <cmath>
#include <random>

#include "causalkg/collision.hpp"
#include "causalkg/inference.hpp"
#include "support/random_models.hpp"
#include "support/test_oracle.hpp"

using namespace causalkg;

namespace {

Assignment all_false(const CausalBayesianNetwork& m) {
  Assignment a;
  for (const auto& v : m.variables()) a[v.name] = "false";
  return a;
}

CausalBayesianNetwork chain_ab() {
  CausalBayesianNetwork m;
  Cpt a;
  a.rows.emplace(std::vector<int>{}, std::vector<double>{0.7, 0.3});
  m.add(Variable{"A", {"false", "true"}, {}, {}}, std::move(a));
  Cpt b;
  b.rows.emplace(std::vector<int>{0}, std::vector<double>{0.8, 0.2});
  b.rows.emplace(std::vector<int>{1}, std::vector<double>{0.3, 0.7});
  m.add(Variable{"B", {"false", "true"}, {}, {"A"}}, std::move(b));
  return m;
}

void check_matches_oracle(const CausalBayesianNetwork& m,
                          const std::vector<std::string>& targets,
                          const Assignment& evidence) {
  auto en = query_enumerate(m, targets, evidence);
  auto ve = query_ve(m, targets, evidence);
  REQUIRE(en.probabilities.size() == ve.probabilities.size());
  for (std::size_t i = 0; i < en.probabilities.size(); ++i) {
    CHECK(std::abs(en.probabilities[i] - ve.probabilities[i]) < 1e-9);
  }
  std::vector<int> target_ids;
  for (const auto& t : targets) target_ids.push_back(m.require_index(t));
  std::map<int, int> ev;
  for (const auto& [name, label] : evidence) {
    int v = m.require_index(name);
    ev[v] = m.state_index(v, label);
  }
  auto reference = testsupport::oracle_posterior(m, target_ids, ev);
  for (const auto& [key, p] : reference) {
    CHECK(std::abs(en.probabilities[en.index_of(key)] - p) < 1e-9);
  }
}

}  // namespace

TEST_CASE("joint probability of the all-false fixture assignment") {
  auto m = collision_fixture();
  CHECK(joint_probability(m, all_false(m)) ==
        doctest::Approx(0.330978879).epsilon(1e-12));
}

TEST_CASE("joint probability of a one-factor model") {
  CausalBayesianNetwork m;
  Cpt cpt;
  cpt.rows.emplace(std::vector<int>{}, std::vector<double>{0.4, 0.6});
  m.add(Variable{"A", {"false", "true"}, {}, {}}, std::move(cpt));
  CHECK(joint_probability(m, {{"A", "true"}}) == doctest::Approx(0.6));
}

TEST_CASE("joint probability rejects partial assignments") {
  auto m = collision_fixture();
  auto a = all_false(m);
  a.erase("Rain");
  try {
    joint_probability(m, a);
    FAIL("expected incomplete_assignment");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::incomplete_assignment);
    CHECK(std::string(e.what()).find("Rain") != std::string::npos);
  }
  a["Rain"] = "sleet";
  try {
    joint_probability(m, a);
    FAIL("expected unknown_state");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unknown_state);
  }
}

TEST_CASE("summing the joint over all assignments gives 1") {
  auto m = collision_fixture();
  std::vector<int> full(m.size(), 0);
  double total = 0.0;
  while (true) {
    Assignment a;
    for (int v = 0; v < m.size(); ++v) {
      a[m.variable(v).name] = m.variable(v).states[full[v]];
    }
    total += joint_probability(m, a);
    int k = m.size() - 1;
    while (k >= 0 && ++full[k] == 2) full[k--] = 0;
    if (k < 0) break;
  }
  CHECK(std::abs(total - 1.0) < 1e-9);
}

TEST_CASE("chain marginal by direct summation") {
  auto m = chain_ab();
  auto d = query_enumerate(m, {"B"});
  CHECK(d.probabilities[1] == doctest::Approx(0.3 * 0.7 + 0.7 * 0.2));
  CHECK(d.probability_of({{"B", "true"}}) == doctest::Approx(0.35));
}

TEST_CASE("fixture posterior golden: P(Collision | CellphoneUse=true)") {
  auto m = collision_fixture();
  for (auto backend : {Backend::enumerate, Backend::variable_elimination}) {
    auto d = query(m, {"Collision"}, {{"CellphoneUse", "true"}}, backend);
    CHECK(std::abs(d.probabilities[1] - 0.203964875) < 1e-9);
  }
}

TEST_CASE("fixture prior golden: P(Collision=true)") {
  auto m = collision_fixture();
  auto d = query_enumerate(m, {"Collision"});
  CHECK(std::abs(d.probabilities[1] - 0.116473058) < 1e-9);
}

TEST_CASE("zero-probability evidence is an error, not NaN") {
  CausalBayesianNetwork m;
  Cpt degenerate;
  degenerate.rows.emplace(std::vector<int>{}, std::vector<double>{1.0, 0.0});
  m.add(Variable{"A", {"false", "true"}, {}, {}}, std::move(degenerate));
  Cpt b;
  b.rows.emplace(std::vector<int>{0}, std::vector<double>{0.5, 0.5});
  b.rows.emplace(std::vector<int>{1}, std::vector<double>{0.5, 0.5});
  m.add(Variable{"B", {"false", "true"}, {}, {"A"}}, std::move(b));

  CHECK_THROWS_AS(query_enumerate(m, {"B"}, {{"A", "true"}}), Error);
  CHECK_THROWS_AS(query_ve(m, {"B"}, {{"A", "true"}}), Error);
  try {
    query_enumerate(m, {"B"}, {{"A", "true"}});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::zero_probability_evidence);
  }
}

TEST_CASE("targets overlapping evidence are rejected") {
  auto m = collision_fixture();
  CHECK_THROWS_AS(query_enumerate(m, {"Snow"}, {{"Snow", "true"}}), Error);
  CHECK_THROWS_AS(query_ve(m, {"Snow"}, {{"Snow", "true"}}), Error);
}

TEST_CASE("variable elimination matches enumeration on the fixture") {
  auto m = collision_fixture();
  check_matches_oracle(m, {"Collision"}, {});
  check_matches_oracle(m, {"Collision"}, {{"Rain", "true"}});
  check_matches_oracle(m, {"Snow", "Collision"}, {{"CellphoneUse", "true"}});
  check_matches_oracle(m, {"DriverDistraction", "SlipperyRoad"},
                       {{"Collision", "true"}, {"Snow", "false"}});
  // full joint, no evidence: normalization sanity
  std::vector<std::string> everything;
  for (const auto& v : m.variables()) everything.push_back(v.name);
  auto full = query_ve(m, everything, {});
  double total = 0.0;
  for (double p : full.probabilities) total += p;
  CHECK(std::abs(total - 1.0) < 1e-9);
}

TEST_CASE("randomized oracle equivalence on small DAGs") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 100; ++round) {
    int n = 2 + static_cast<int>(rng() % 5);
    auto m = testsupport::random_model(rng, n);
    std::vector<std::string> targets{"V0"};
    if (n > 2 && rng() % 2) targets.push_back("V" + std::to_string(n - 1));
    Assignment evidence;
    if (static_cast<std::size_t>(n) > targets.size() && rng() % 2) {
      evidence["V1"] = (rng() % 2) ? "true" : "false";
    }
    for (const auto& t : targets) evidence.erase(t);
    check_matches_oracle(m, targets, evidence);
  }
}

TEST_CASE("sampling basics") {
  auto m = collision_fixture();
  SUBCASE("n = 0 keeps the header") {
    auto d = sample(m, 0, 1);
    CHECK(d.rows.empty());
    CHECK(d.columns.size() == 8);
    CHECK(d.columns[0] == "CellphoneUse");
  }
  SUBCASE("same seed, same data") {
    auto a = sample(m, 500, 42);
    auto b = sample(m, 500, 42);
    CHECK(a.rows == b.rows);
    auto c = sample(m, 500, 43);
    CHECK(a.rows != c.rows);
  }
  SUBCASE("empirical frequency concentrates") {
    auto d = sample(m, 100000, 42);
    std::size_t snow_col = 0;
    while (d.columns[snow_col] != "Snow") ++snow_col;
    double count = 0;
    for (const auto& row : d.rows) count += row[snow_col] == "true";
    CHECK(std::abs(count / d.rows.size() - 0.2) < 0.01);
  }
}

TEST_CASE("fit_cpts") {
  auto m = collision_fixture();
  CausalBayesianNetwork skeleton;
  for (int v = 0; v < m.size(); ++v) skeleton.add(m.variable(v), Cpt{});

  SUBCASE("recovers the fixture from 100k samples") {
    auto data = sample(m, 100000, 42);
    auto fitted = fit_cpts(skeleton, data, 1.0);
    CHECK(validate(fitted).ok());
    double worst = 0.0;
    for (int v = 0; v < m.size(); ++v) {
      for (const auto& [key, dist] : m.cpt(v).rows) {
        const auto& est = fitted.cpt(v).rows.at(key);
        for (std::size_t s = 0; s < dist.size(); ++s) {
          worst = std::max(worst, std::abs(dist[s] - est[s]));
        }
      }
    }
    CHECK(worst <= 0.02);
  }
  SUBCASE("empty data with alpha=1 gives uniform rows") {
    Dataset empty;
    for (const auto& v : skeleton.variables()) empty.columns.push_back(v.name);
    auto fitted = fit_cpts(skeleton, empty, 1.0);
    for (int v = 0; v < fitted.size(); ++v) {
      for (const auto& [key, dist] : fitted.cpt(v).rows) {
        for (double p : dist) CHECK(p == doctest::Approx(0.5));
      }
    }
  }
  SUBCASE("alpha=0 with an unobserved parent configuration") {
    Dataset tiny = sample(m, 3, 1);
    CHECK_THROWS_AS(fit_cpts(skeleton, tiny, 0.0), Error);
    try {
      fit_cpts(skeleton, tiny, 0.0);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::unestimable_row);
    }
  }
  SUBCASE("missing column") {
    Dataset d;
    d.columns = {"Snow"};
    CHECK_THROWS_AS(fit_cpts(skeleton, d, 1.0), Error);
    try {
      fit_cpts(skeleton, d, 1.0);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::missing_column);
    }
  }
}
