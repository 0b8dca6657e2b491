#include "causalkg/model_json.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace causalkg {

namespace {

using nlohmann::ordered_json;

// Maps a "given" object onto parent state indices in declaration order.
// Label resolution needs the variable declarations, so CPT rows are decoded
// in a second pass once every variable is known.
std::vector<int> decode_given(const CausalBayesianNetwork& model, int var,
                              const ordered_json& given) {
  const Variable& v = model.variable(var);
  if (!given.is_object()) {
    throw Error(ErrorKind::format,
                "cpt row 'given' must be an object for variable " + v.name);
  }
  std::vector<int> key(v.parents.size(), -1);
  for (const auto& [pname, plabel] : given.items()) {
    auto pos = std::find(v.parents.begin(), v.parents.end(), pname);
    if (pos == v.parents.end()) {
      throw Error(ErrorKind::format, "cpt row for variable " + v.name +
                                         " conditions on non-parent '" +
                                         pname + "'");
    }
    int pi = model.require_index(pname);
    key[pos - v.parents.begin()] =
        model.state_index(pi, plabel.get<std::string>());
  }
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (key[i] < 0) {
      throw Error(ErrorKind::format, "cpt row for variable " + v.name +
                                         " misses parent '" + v.parents[i] +
                                         "'");
    }
  }
  return key;
}

}  // namespace

CausalBayesianNetwork model_from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::format, std::string("invalid model JSON: ") +
                                       e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("variables") ||
        !doc["variables"].is_array()) {
      throw Error(ErrorKind::format,
                  "model JSON needs a top-level 'variables' array");
    }
    CausalBayesianNetwork model;
    for (const auto& jv : doc["variables"]) {
      Variable v;
      v.name = jv.at("name").get<std::string>();
      for (const auto& s : jv.at("states")) {
        v.states.push_back(s.get<std::string>());
      }
      if (jv.contains("values")) {
        for (const auto& val : jv["values"]) {
          v.state_values.push_back(val.get<double>());
        }
      }
      if (jv.contains("parents")) {
        for (const auto& p : jv["parents"]) {
          v.parents.push_back(p.get<std::string>());
        }
      }
      model.add(std::move(v), Cpt{});
    }
    // second pass: decode CPTs now that all state labels are known
    CausalBayesianNetwork out;
    int index = 0;
    for (const auto& jv : doc["variables"]) {
      Variable v = model.variable(index);
      Cpt cpt;
      if (jv.contains("cpt")) {
        for (const auto& row : jv.at("cpt")) {
          auto key = decode_given(model, index, row.at("given"));
          std::vector<double> dist(v.states.size(), 0.0);
          for (const auto& [label, prob] : row.at("dist").items()) {
            dist[model.state_index(index, label)] = prob.get<double>();
          }
          if (!cpt.rows.emplace(std::move(key), std::move(dist)).second) {
            throw Error(ErrorKind::format,
                        "duplicate cpt row for variable " + v.name);
          }
        }
      }
      out.add(std::move(v), std::move(cpt));
      ++index;
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::format, std::string("invalid model JSON: ") +
                                       e.what());
  } catch (const Error& e) {
    // unresolved labels inside the file are a file-format problem
    if (e.kind() == ErrorKind::format || e.kind() == ErrorKind::io) throw;
    throw Error(ErrorKind::format, std::string("invalid model JSON: ") +
                                       e.what());
  }
}

std::string model_to_json(const CausalBayesianNetwork& model) {
  ordered_json variables = ordered_json::array();
  for (int i = 0; i < model.size(); ++i) {
    const Variable& v = model.variable(i);
    ordered_json jv;
    jv["name"] = v.name;
    jv["states"] = v.states;
    jv["values"] = v.state_values;
    jv["parents"] = v.parents;
    ordered_json rows = ordered_json::array();
    for (const auto& [key, dist] : model.cpt(i).rows) {
      ordered_json given = ordered_json::object();
      for (std::size_t k = 0; k < key.size(); ++k) {
        int pi = model.index_of(v.parents[k]);
        given[v.parents[k]] = model.variable(pi).states[key[k]];
      }
      ordered_json d = ordered_json::object();
      for (std::size_t s = 0; s < dist.size(); ++s) {
        d[v.states[s]] = dist[s];
      }
      rows.push_back({{"given", given}, {"dist", d}});
    }
    jv["cpt"] = rows;
    variables.push_back(jv);
  }
  ordered_json doc;
  doc["variables"] = variables;
  return doc.dump(2) + "\n";
}

CausalBayesianNetwork load_model(const std::string& path) {
  return model_from_json(read_file(path));
}

void save_model(const CausalBayesianNetwork& model, const std::string& path) {
  write_file(path, model_to_json(model));
}

Dataset dataset_from_csv(const std::string& text) {
  Dataset data;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.eof()) break;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (header) {
      data.columns = std::move(cells);
      header = false;
    } else {
      if (cells.size() != data.columns.size()) {
        throw Error(ErrorKind::format,
                    "CSV row has " + std::to_string(cells.size()) +
                        " cells, expected " +
                        std::to_string(data.columns.size()));
      }
      data.rows.push_back(std::move(cells));
    }
  }
  if (header) {
    throw Error(ErrorKind::format, "CSV has no header row");
  }
  return data;
}

std::string dataset_to_csv(const Dataset& data) {
  std::string out;
  auto append_row = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  append_row(data.columns);
  for (const auto& row : data.rows) append_row(row);
  return out;
}

Dataset load_dataset(const std::string& path) {
  return dataset_from_csv(read_file(path));
}

void save_dataset(const Dataset& data, const std::string& path) {
  write_file(path, dataset_to_csv(data));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::io, "cannot read file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::io, "cannot write file: " + path);
  }
  out << content;
  if (!out) {
    throw Error(ErrorKind::io, "write failed: " + path);
  }
}

}  // namespace causalkg
