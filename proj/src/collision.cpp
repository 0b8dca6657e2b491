#include "causalkg/collision.hpp"

namespace causalkg {

namespace {

const std::vector<std::string> kStates{"false", "true"};
const std::vector<double> kValues{0.0, 1.0};

// row over {false, true} from P(true)
std::vector<double> bt(double p_true) { return {1.0 - p_true, p_true}; }

void add_root(CausalBayesianNetwork& m, const std::string& name,
              double p_true) {
  Cpt cpt;
  cpt.rows.emplace(std::vector<int>{}, bt(p_true));
  m.add(Variable{name, kStates, kValues, {}}, std::move(cpt));
}

// p_true listed for parent states FF, TF, FT, TT (first parent toggling
// fastest in the "T" direction of the label), i.e. index = (a, b) pairs
// (0,0), (1,0), (0,1), (1,1)
void add_two_parent(CausalBayesianNetwork& m, const std::string& name,
                    const std::string& pa, const std::string& pb, double ff,
                    double tf, double ft, double tt) {
  Cpt cpt;
  cpt.rows.emplace(std::vector<int>{0, 0}, bt(ff));
  cpt.rows.emplace(std::vector<int>{1, 0}, bt(tf));
  cpt.rows.emplace(std::vector<int>{0, 1}, bt(ft));
  cpt.rows.emplace(std::vector<int>{1, 1}, bt(tt));
  m.add(Variable{name, kStates, kValues, {pa, pb}}, std::move(cpt));
}

}  // namespace

CausalBayesianNetwork collision_fixture() {
  CausalBayesianNetwork m;
  add_root(m, "CellphoneUse", 0.3);
  add_root(m, "Alcohol", 0.1);
  add_root(m, "Snow", 0.2);
  add_root(m, "Rain", 0.25);
  add_two_parent(m, "DriverDistraction", "CellphoneUse", "Alcohol",
                 0.05, 0.6, 0.5, 0.85);
  add_two_parent(m, "SlipperyRoad", "Snow", "Rain", 0.02, 0.7, 0.5, 0.9);
  add_two_parent(m, "SuddenLaneChange", "DriverDistraction", "SlipperyRoad",
                 0.05, 0.4, 0.3, 0.6);

  // P(Collision=true | LaneChange, Distraction, Slippery) for
  // FFF, TFF, FTF, FFT, TTF, TFT, FTT, TTT
  Cpt collision;
  collision.rows.emplace(std::vector<int>{0, 0, 0}, bt(0.01));
  collision.rows.emplace(std::vector<int>{1, 0, 0}, bt(0.2));
  collision.rows.emplace(std::vector<int>{0, 1, 0}, bt(0.1));
  collision.rows.emplace(std::vector<int>{0, 0, 1}, bt(0.08));
  collision.rows.emplace(std::vector<int>{1, 1, 0}, bt(0.45));
  collision.rows.emplace(std::vector<int>{1, 0, 1}, bt(0.35));
  collision.rows.emplace(std::vector<int>{0, 1, 1}, bt(0.2));
  collision.rows.emplace(std::vector<int>{1, 1, 1}, bt(0.6));
  m.add(Variable{"Collision",
                 kStates,
                 kValues,
                 {"SuddenLaneChange", "DriverDistraction", "SlipperyRoad"}},
        std::move(collision));
  return m;
}

RoleMapping collision_roles() {
  RoleMapping mapping;
  mapping.base_iri = "http://example.org/ad#";
  mapping.prefix = "ad";
  mapping.entries["DriverDistraction"] = RoleEntry{CausalRole::treatment, "", std::nullopt};
  mapping.entries["SuddenLaneChange"] =
      RoleEntry{CausalRole::mediator, "",
                PatternRef{"DriverDistraction", "Collision"}};
  mapping.entries["Collision"] = RoleEntry{CausalRole::outcome, "", std::nullopt};
  return mapping;
}

std::string collision_readme() {
  return R"md(# Collision example

A small causal Bayesian network of highway collision scenarios: driver
distraction (from cellphone use or alcohol) and slippery roads (from snow or
rain) can trigger a sudden lane change and, with it, a collision.

Files:
- collision.json  -- the model (variables, edges, CPTs)
- roles.json      -- causal roles and IRIs for the knowledge graph

Build the knowledge graph:

    causalkg build collision.json --roles roles.json -o collision.ttls

Three causal questions about the network, one per cause level:

Basic cause (total causal effect): how would the driver's distraction affect
the occurrence of a collision?

    causalkg query collision.json "TCE(DriverDistraction -> Collision)"

Direct cause (natural direct effect): what part of that effect does not run
through the sudden lane change?

    causalkg query collision.json "NDE(DriverDistraction -> Collision | via SuddenLaneChange)"

Indirect cause (natural indirect effect): what part is carried by the sudden
lane change itself?

    causalkg query collision.json "NIE(DriverDistraction -> Collision | via SuddenLaneChange)"

Add `--kg collision.ttls --explain` to any query for a rendered explanation
that cites the causal paths in the graph.
)md";
}

}  // namespace causalkg
