#pragma once

#include <string>

#include "causalkg/model.hpp"

namespace causalkg {

/// Model JSON: {"variables": [{"name", "states", "values"?, "parents",
/// "cpt": [{"given": {parent: state}, "dist": {state: prob}}]}]}.
/// "values" defaults to state indices; "cpt" may be absent (skeleton).
CausalBayesianNetwork model_from_json(const std::string& text);
std::string model_to_json(const CausalBayesianNetwork& model);

CausalBayesianNetwork load_model(const std::string& path);
void save_model(const CausalBayesianNetwork& model, const std::string& path);

/// Dataset CSV: header row of variable names, one state label per cell,
/// UTF-8, LF line endings.
Dataset dataset_from_csv(const std::string& text);
std::string dataset_to_csv(const Dataset& data);

Dataset load_dataset(const std::string& path);
void save_dataset(const Dataset& data, const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace causalkg
