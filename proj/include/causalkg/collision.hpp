#pragma once

#include "causalkg/model.hpp"
#include "causalkg/ontology.hpp"

namespace causalkg {

/// The highway-collision network: CellphoneUse, Alcohol, Snow and Rain are
/// exogenous; DriverDistraction and SlipperyRoad aggregate them; both feed
/// SuddenLaneChange, and Collision depends on all three of SuddenLaneChange,
/// DriverDistraction and SlipperyRoad. All variables are binary
/// {false, true} valued 0/1.
CausalBayesianNetwork collision_fixture();

/// Role mapping for the fixture: DriverDistraction is the Treatment,
/// SuddenLaneChange mediates (DriverDistraction, Collision), Collision is
/// the Outcome; everything else defaults to Context.
RoleMapping collision_roles();

/// README text with the fixture's three runnable example queries.
std::string collision_readme();

}  // namespace causalkg
