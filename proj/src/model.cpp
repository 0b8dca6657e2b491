#include "causalkg/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <sstream>

namespace causalkg {

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& f : findings) {
    out << f.code << " [" << f.subject << "]: " << f.message << "\n";
  }
  return out.str();
}

void CausalBayesianNetwork::add(Variable variable, Cpt cpt) {
  if (variable.state_values.empty()) {
    variable.state_values.resize(variable.states.size());
    for (std::size_t i = 0; i < variable.states.size(); ++i) {
      variable.state_values[i] = static_cast<double>(i);
    }
  }
  // first declaration wins in the name index; validate() reports duplicates
  index_.try_emplace(variable.name, static_cast<int>(variables_.size()));
  variables_.push_back(std::move(variable));
  cpts_.push_back(std::move(cpt));
}

int CausalBayesianNetwork::index_of(std::string_view name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

int CausalBayesianNetwork::require_index(std::string_view name) const {
  int i = index_of(name);
  if (i < 0) {
    throw Error(ErrorKind::unknown_variable,
                "unknown variable: " + std::string(name));
  }
  return i;
}

int CausalBayesianNetwork::state_index(int variable_index,
                                       std::string_view label) const {
  const Variable& v = variables_.at(variable_index);
  for (std::size_t i = 0; i < v.states.size(); ++i) {
    if (v.states[i] == label) return static_cast<int>(i);
  }
  throw Error(ErrorKind::unknown_state, "variable " + v.name +
                                            " has no state '" +
                                            std::string(label) + "'");
}

std::vector<int> CausalBayesianNetwork::parent_indices(
    int variable_index) const {
  const Variable& v = variables_.at(variable_index);
  std::vector<int> out;
  out.reserve(v.parents.size());
  for (const auto& p : v.parents) {
    int i = index_of(p);
    if (i < 0) {
      throw Error(ErrorKind::invalid_model, "variable " + v.name +
                                                " references unknown parent '" +
                                                p + "'");
    }
    out.push_back(i);
  }
  return out;
}

std::vector<int> CausalBayesianNetwork::topological_order() const {
  const int n = size();
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<int>> children(n);
  for (int v = 0; v < n; ++v) {
    for (int p : parent_indices(v)) {
      children[p].push_back(v);
      ++indegree[v];
    }
  }
  // Kahn's algorithm; the ready set is kept sorted so the order is stable.
  std::set<int> ready;
  for (int v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.insert(v);
  }
  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    int v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(v);
    for (int c : children[v]) {
      if (--indegree[c] == 0) ready.insert(c);
    }
  }
  if (static_cast<int>(order.size()) != n) {
    throw Error(ErrorKind::invalid_model, "model graph is cyclic");
  }
  return order;
}

bool CausalBayesianNetwork::is_ancestor(int ancestor, int descendant) const {
  if (ancestor == descendant) return false;
  std::vector<bool> seen(size(), false);
  std::vector<int> stack{descendant};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int p : parent_indices(v)) {
      if (p == ancestor) return true;
      if (!seen[p]) {
        seen[p] = true;
        stack.push_back(p);
      }
    }
  }
  return false;
}

std::vector<int> CausalBayesianNetwork::descendants(int variable_index) const {
  const int n = size();
  std::vector<std::vector<int>> children(n);
  for (int v = 0; v < n; ++v) {
    for (int p : parent_indices(v)) children[p].push_back(v);
  }
  std::vector<bool> seen(n, false);
  std::vector<int> stack{variable_index};
  std::vector<int> out;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int c : children[v]) {
      if (!seen[c]) {
        seen[c] = true;
        out.push_back(c);
        stack.push_back(c);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void add_finding(ValidationReport& report, std::string code,
                 std::string subject, std::string message) {
  report.findings.push_back(
      {std::move(code), std::move(subject), std::move(message)});
}

// Reports one representative cycle through `start`, e.g. "cycle: A->B->A".
std::string trace_cycle(const CausalBayesianNetwork& m, int start) {
  std::vector<int> path;
  std::vector<bool> on_path(m.size(), false);
  std::string found;
  auto dfs = [&](auto&& self, int v) -> bool {
    path.push_back(v);
    on_path[v] = true;
    for (int p : m.parent_indices(v)) {
      if (p == start) {
        std::string text = "cycle: " + m.variable(start).name;
        for (auto it = path.rbegin(); it != path.rend(); ++it) {
          text += "->" + m.variable(*it).name;
        }
        found = text;
        return true;
      }
      if (!on_path[p] && self(self, p)) return true;
    }
    path.pop_back();
    on_path[v] = false;
    return false;
  };
  dfs(dfs, start);
  return found;
}

std::string describe_row(const CausalBayesianNetwork& m, int var,
                         const std::vector<int>& key) {
  const Variable& v = m.variable(var);
  if (v.parents.empty()) return "()";
  std::string out = "(";
  for (std::size_t i = 0; i < v.parents.size(); ++i) {
    if (i) out += ", ";
    out += v.parents[i];
    out += "=";
    int pi = m.index_of(v.parents[i]);
    if (pi >= 0 && i < key.size() && key[i] >= 0 &&
        key[i] < m.cardinality(pi)) {
      out += m.variable(pi).states[key[i]];
    } else {
      out += "?";
    }
  }
  return out + ")";
}

ValidationReport validate_impl(const CausalBayesianNetwork& model,
                               bool check_cpts) {
  ValidationReport report;
  const int n = model.size();

  std::map<std::string, int> name_count;
  for (const auto& v : model.variables()) ++name_count[v.name];
  for (const auto& [name, count] : name_count) {
    if (count > 1) {
      add_finding(report, "duplicate-variable", name,
                  "variable declared " + std::to_string(count) + " times");
    }
  }

  bool names_resolve = true;
  for (int i = 0; i < n; ++i) {
    const Variable& v = model.variable(i);
    if (v.states.size() < 2) {
      add_finding(report, "state-count", v.name,
                  "variable needs at least 2 states, has " +
                      std::to_string(v.states.size()));
    }
    std::set<std::string> unique(v.states.begin(), v.states.end());
    if (unique.size() != v.states.size()) {
      add_finding(report, "duplicate-state", v.name,
                  "state labels are not unique");
    }
    if (v.state_values.size() != v.states.size()) {
      add_finding(report, "value-count", v.name,
                  "state_values length " +
                      std::to_string(v.state_values.size()) +
                      " does not match state count " +
                      std::to_string(v.states.size()));
    }
    for (const auto& p : v.parents) {
      if (model.index_of(p) < 0) {
        names_resolve = false;
        add_finding(report, "unknown-parent", v.name,
                    "parent '" + p + "' is not a declared variable");
      }
    }
  }

  if (names_resolve) {
    // Cycle check: report each cycle once, keyed by its smallest member.
    std::vector<int> color(n, 0);
    std::set<int> reported;
    auto visit = [&](auto&& self, int v) -> int {
      color[v] = 1;
      int cycle_at = -1;
      for (int p : model.parent_indices(v)) {
        if (color[p] == 1) {
          cycle_at = p;
        } else if (color[p] == 0) {
          int r = self(self, p);
          if (r >= 0) cycle_at = r;
        }
      }
      color[v] = 2;
      return cycle_at;
    };
    for (int v = 0; v < n; ++v) {
      if (color[v] == 0) {
        int at = visit(visit, v);
        if (at >= 0 && reported.insert(at).second) {
          add_finding(report, "cycle", model.variable(at).name,
                      trace_cycle(model, at));
        }
      }
    }
  }

  if (!check_cpts || !names_resolve) return report;

  for (int i = 0; i < n; ++i) {
    const Variable& v = model.variable(i);
    const Cpt& cpt = model.cpt(i);
    std::vector<int> parents;
    long expected_rows = 1;
    bool key_shape_ok = true;
    for (const auto& p : v.parents) {
      int pi = model.index_of(p);
      parents.push_back(pi);
      expected_rows *= model.cardinality(pi);
    }
    for (const auto& [key, dist] : cpt.rows) {
      if (key.size() != parents.size()) {
        key_shape_ok = false;
        add_finding(report, "cpt-row-key", v.name,
                    "row key arity " + std::to_string(key.size()) +
                        " does not match parent count " +
                        std::to_string(parents.size()));
        continue;
      }
      for (std::size_t k = 0; k < key.size(); ++k) {
        if (key[k] < 0 || key[k] >= model.cardinality(parents[k])) {
          key_shape_ok = false;
          add_finding(report, "cpt-row-key", v.name,
                      "row " + describe_row(model, i, key) +
                          " indexes a state out of range");
        }
      }
      if (dist.size() != v.states.size()) {
        add_finding(report, "cpt-row-width", v.name,
                    "row " + describe_row(model, i, key) + " has " +
                        std::to_string(dist.size()) + " entries, expected " +
                        std::to_string(v.states.size()));
        continue;
      }
      double sum = 0.0;
      bool in_range = true;
      for (double p : dist) {
        sum += p;
        if (!(p >= 0.0 && p <= 1.0)) in_range = false;
      }
      if (!in_range) {
        add_finding(report, "cpt-entry-range", v.name,
                    "row " + describe_row(model, i, key) +
                        " has entries outside [0,1]");
      } else if (std::abs(sum - 1.0) > kRowSumTolerance) {
        std::ostringstream msg;
        msg << "row " << describe_row(model, i, key) << " sums to " << sum;
        add_finding(report, "cpt-row-sum", v.name, msg.str());
      }
    }
    if (key_shape_ok &&
        static_cast<long>(cpt.rows.size()) != expected_rows) {
      add_finding(report, "cpt-row-count", v.name,
                  "table has " + std::to_string(cpt.rows.size()) +
                      " rows, expected " + std::to_string(expected_rows));
    }
  }
  return report;
}

}  // namespace

ValidationReport validate(const CausalBayesianNetwork& model) {
  return validate_impl(model, true);
}

ValidationReport validate_structure(const CausalBayesianNetwork& model) {
  return validate_impl(model, false);
}

}  // namespace causalkg
