#include "causalkg/inference.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <set>

#include "causalkg/factor.hpp"

namespace causalkg {
namespace detail {

std::size_t CompiledModel::row_of(int variable,
                                  const std::vector<int>& full) const {
  std::size_t row = 0;
  for (int p : parents[variable]) {
    row = row * cards[p] + full[p];
  }
  return row;
}

double CompiledModel::prob(int variable, const std::vector<int>& full,
                           int state) const {
  return tables[variable][row_of(variable, full) * cards[variable] + state];
}

CompiledModel compile(const CausalBayesianNetwork& model) {
  CompiledModel c;
  c.model = &model;
  const int n = model.size();
  c.parents.resize(n);
  c.cards.resize(n);
  c.tables.resize(n);
  for (int v = 0; v < n; ++v) {
    c.parents[v] = model.parent_indices(v);
    c.cards[v] = model.cardinality(v);
  }
  c.topo_order = model.topological_order();
  for (int v = 0; v < n; ++v) {
    std::size_t rows = 1;
    for (int p : c.parents[v]) rows *= c.cards[p];
    c.tables[v].assign(rows * c.cards[v],
                       std::numeric_limits<double>::quiet_NaN());
    for (const auto& [key, dist] : model.cpt(v).rows) {
      if (key.size() != c.parents[v].size() ||
          dist.size() != static_cast<std::size_t>(c.cards[v])) {
        throw Error(ErrorKind::invalid_model,
                    "malformed CPT for variable " + model.variable(v).name);
      }
      std::size_t row = 0;
      for (std::size_t i = 0; i < key.size(); ++i) {
        int card = c.cards[c.parents[v][i]];
        if (key[i] < 0 || key[i] >= card) {
          throw Error(ErrorKind::invalid_model,
                      "CPT row out of range for variable " +
                          model.variable(v).name);
        }
        row = row * card + key[i];
      }
      std::copy(dist.begin(), dist.end(),
                c.tables[v].begin() + row * c.cards[v]);
    }
    for (double p : c.tables[v]) {
      if (std::isnan(p)) {
        throw Error(ErrorKind::invalid_model,
                    "incomplete CPT for variable " + model.variable(v).name);
      }
    }
  }
  return c;
}

std::vector<int> resolve_evidence(const CausalBayesianNetwork& model,
                                  const Assignment& evidence) {
  std::vector<int> bound(model.size(), -1);
  for (const auto& [name, label] : evidence) {
    int v = model.require_index(name);
    bound[v] = model.state_index(v, label);
  }
  return bound;
}

namespace {

// Advances a mixed-radix counter; returns false after the last state.
bool next_state(std::vector<int>& state, const std::vector<int>& cards) {
  for (int k = static_cast<int>(state.size()) - 1; k >= 0; --k) {
    if (++state[k] < cards[k]) return true;
    state[k] = 0;
  }
  return false;
}

std::vector<int> resolve_targets(const CausalBayesianNetwork& model,
                                 const std::vector<std::string>& targets,
                                 const std::vector<int>& evidence_bound) {
  if (targets.empty()) {
    throw Error(ErrorKind::invalid_query, "query needs at least one target");
  }
  std::vector<int> out;
  std::set<int> seen;
  for (const auto& t : targets) {
    int v = model.require_index(t);
    if (!seen.insert(v).second) {
      throw Error(ErrorKind::invalid_query, "duplicate target: " + t);
    }
    if (evidence_bound[v] >= 0) {
      throw Error(ErrorKind::invalid_query,
                  "variable " + t + " appears as both target and evidence");
    }
    out.push_back(v);
  }
  return out;
}

Distribution make_distribution(const CausalBayesianNetwork& model,
                               const std::vector<int>& target_ids,
                               std::vector<double> probabilities) {
  Distribution d;
  for (int v : target_ids) {
    d.variables.push_back(model.variable(v).name);
    d.state_labels.push_back(model.variable(v).states);
  }
  d.probabilities = std::move(probabilities);
  return d;
}

}  // namespace
}  // namespace detail

double Distribution::probability_of(const Assignment& bindings) const {
  std::vector<int> states(variables.size(), -1);
  for (std::size_t i = 0; i < variables.size(); ++i) {
    auto it = bindings.find(variables[i]);
    if (it == bindings.end()) {
      throw Error(ErrorKind::incomplete_assignment,
                  "distribution lookup misses variable " + variables[i]);
    }
    const auto& labels = state_labels[i];
    auto pos = std::find(labels.begin(), labels.end(), it->second);
    if (pos == labels.end()) {
      throw Error(ErrorKind::unknown_state,
                  "variable " + variables[i] + " has no state '" +
                      it->second + "'");
    }
    states[i] = static_cast<int>(pos - labels.begin());
  }
  return probabilities[index_of(states)];
}

std::size_t Distribution::index_of(const std::vector<int>& states) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < variables.size(); ++i) {
    idx = idx * state_labels[i].size() + states[i];
  }
  return idx;
}

double joint_probability(const CausalBayesianNetwork& model,
                         const Assignment& assignment) {
  auto compiled = detail::compile(model);
  const int n = model.size();
  std::vector<int> full(n, -1);
  for (const auto& [name, label] : assignment) {
    int v = model.require_index(name);
    full[v] = model.state_index(v, label);
  }
  for (int v = 0; v < n; ++v) {
    if (full[v] < 0) {
      throw Error(ErrorKind::incomplete_assignment,
                  "assignment does not bind variable " +
                      model.variable(v).name);
    }
  }
  double p = 1.0;
  for (int v = 0; v < n; ++v) {
    p *= compiled.prob(v, full, full[v]);
  }
  return p;
}

Distribution query_enumerate(const CausalBayesianNetwork& model,
                             const std::vector<std::string>& targets,
                             const Assignment& evidence) {
  auto compiled = detail::compile(model);
  auto bound = detail::resolve_evidence(model, evidence);
  auto target_ids = detail::resolve_targets(model, targets, bound);

  std::size_t cells = 1;
  for (int v : target_ids) cells *= compiled.cards[v];
  std::vector<double> accum(cells, 0.0);

  const int n = model.size();
  // Enumerate only over unbound variables; evidence stays fixed.
  std::vector<int> free_vars, free_cards;
  std::vector<int> full(n, 0);
  for (int v = 0; v < n; ++v) {
    if (bound[v] >= 0) {
      full[v] = bound[v];
    } else {
      free_vars.push_back(v);
      free_cards.push_back(compiled.cards[v]);
    }
  }
  std::vector<int> state(free_vars.size(), 0);
  double z = 0.0;
  std::vector<int> target_state(target_ids.size(), 0);
  do {
    for (std::size_t i = 0; i < free_vars.size(); ++i) {
      full[free_vars[i]] = state[i];
    }
    double p = 1.0;
    for (int v = 0; v < n; ++v) {
      p *= compiled.prob(v, full, full[v]);
      if (p == 0.0) break;
    }
    if (p != 0.0) {
      z += p;
      std::size_t idx = 0;
      for (std::size_t i = 0; i < target_ids.size(); ++i) {
        target_state[i] = full[target_ids[i]];
        idx = idx * compiled.cards[target_ids[i]] + target_state[i];
      }
      accum[idx] += p;
    }
  } while (detail::next_state(state, free_cards));

  if (z == 0.0) {
    throw Error(ErrorKind::zero_probability_evidence,
                "evidence has probability zero");
  }
  for (double& p : accum) p /= z;
  return detail::make_distribution(model, target_ids, std::move(accum));
}

Distribution query_ve(const CausalBayesianNetwork& model,
                      const std::vector<std::string>& targets,
                      const Assignment& evidence) {
  auto compiled = detail::compile(model);
  auto bound = detail::resolve_evidence(model, evidence);
  auto target_ids = detail::resolve_targets(model, targets, bound);
  const int n = model.size();

  // One factor per CPT over (parents..., variable), reduced by evidence.
  std::vector<Factor> factors;
  for (int v = 0; v < n; ++v) {
    Factor f;
    std::vector<int> scope = compiled.parents[v];
    scope.push_back(v);
    std::sort(scope.begin(), scope.end());
    f.scope = scope;
    for (int s : scope) f.cards.push_back(compiled.cards[s]);
    std::size_t total = 1;
    for (int c : f.cards) total *= c;
    f.table.resize(total);
    std::vector<int> state(scope.size(), 0);
    std::vector<int> full(n, 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
      for (std::size_t i = 0; i < scope.size(); ++i) full[scope[i]] = state[i];
      f.table[idx] = compiled.prob(v, full, full[v]);
      detail::next_state(state, f.cards);
    }
    for (int s : scope) {
      if (bound[s] >= 0) f = factor_reduce(f, s, bound[s]);
    }
    factors.push_back(std::move(f));
  }

  // Min-degree elimination over the factor interaction graph. Ties break on
  // the smaller variable id so runs are reproducible.
  std::set<int> to_eliminate;
  for (int v = 0; v < n; ++v) {
    if (bound[v] < 0 &&
        std::find(target_ids.begin(), target_ids.end(), v) ==
            target_ids.end()) {
      to_eliminate.insert(v);
    }
  }
  std::vector<std::set<int>> neighbors(n);
  for (const auto& f : factors) {
    for (int a : f.scope) {
      for (int b : f.scope) {
        if (a != b) neighbors[a].insert(b);
      }
    }
  }
  while (!to_eliminate.empty()) {
    int best = -1;
    std::size_t best_degree = 0;
    for (int v : to_eliminate) {
      std::size_t degree = neighbors[v].size();
      if (best < 0 || degree < best_degree) {
        best = v;
        best_degree = degree;
      }
    }
    to_eliminate.erase(best);
    for (int u : neighbors[best]) {
      neighbors[u].erase(best);
      for (int w : neighbors[best]) {
        if (u != w) neighbors[u].insert(w);
      }
    }

    Factor combined = Factor::unit();
    std::vector<Factor> rest;
    for (auto& f : factors) {
      if (std::find(f.scope.begin(), f.scope.end(), best) != f.scope.end()) {
        combined = factor_product(combined, f);
      } else {
        rest.push_back(std::move(f));
      }
    }
    rest.push_back(factor_marginalize(combined, best));
    factors = std::move(rest);
  }

  Factor joint = Factor::unit();
  for (const auto& f : factors) joint = factor_product(joint, f);

  double z = factor_total(joint);
  if (z == 0.0) {
    throw Error(ErrorKind::zero_probability_evidence,
                "evidence has probability zero");
  }

  // Reorder the scope (sorted by id) into the requested target order.
  std::size_t cells = 1;
  for (int v : target_ids) cells *= compiled.cards[v];
  std::vector<double> out(cells, 0.0);
  std::vector<int> state(target_ids.size(), 0);
  std::vector<int> cards;
  for (int v : target_ids) cards.push_back(compiled.cards[v]);
  std::vector<int> scope_state(joint.scope.size(), 0);
  for (std::size_t idx = 0; idx < cells; ++idx) {
    for (std::size_t i = 0; i < joint.scope.size(); ++i) {
      auto pos = std::find(target_ids.begin(), target_ids.end(),
                           joint.scope[i]);
      scope_state[i] = state[pos - target_ids.begin()];
    }
    out[idx] = joint.table[joint.index_of(scope_state)] / z;
    detail::next_state(state, cards);
  }
  return detail::make_distribution(model, target_ids, std::move(out));
}

Distribution query(const CausalBayesianNetwork& model,
                   const std::vector<std::string>& targets,
                   const Assignment& evidence, Backend backend) {
  return backend == Backend::enumerate ? query_enumerate(model, targets, evidence)
                                       : query_ve(model, targets, evidence);
}

Dataset sample(const CausalBayesianNetwork& model, std::size_t n,
               std::uint64_t seed) {
  auto compiled = detail::compile(model);
  Dataset data;
  for (const auto& v : model.variables()) data.columns.push_back(v.name);

  std::mt19937_64 rng(seed);
  // Fixed bit-to-double mapping keeps samples identical across platforms.
  auto uniform = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };

  data.rows.reserve(n);
  const int nv = model.size();
  std::vector<int> full(nv, 0);
  for (std::size_t r = 0; r < n; ++r) {
    for (int v : compiled.topo_order) {
      double u = uniform();
      double cum = 0.0;
      int chosen = compiled.cards[v] - 1;
      for (int s = 0; s < compiled.cards[v]; ++s) {
        cum += compiled.prob(v, full, s);
        if (u < cum) {
          chosen = s;
          break;
        }
      }
      full[v] = chosen;
    }
    std::vector<std::string> row(nv);
    for (int v = 0; v < nv; ++v) {
      row[v] = model.variable(v).states[full[v]];
    }
    data.rows.push_back(std::move(row));
  }
  return data;
}

CausalBayesianNetwork fit_cpts(const CausalBayesianNetwork& skeleton,
                               const Dataset& data, double alpha) {
  auto structure = validate_structure(skeleton);
  if (!structure.ok()) {
    throw Error(ErrorKind::invalid_model,
                "skeleton is not structurally valid:\n" + structure.to_string());
  }
  const int n = skeleton.size();
  std::vector<int> column_of(n, -1);
  for (int v = 0; v < n; ++v) {
    const auto& name = skeleton.variable(v).name;
    auto it = std::find(data.columns.begin(), data.columns.end(), name);
    if (it == data.columns.end()) {
      throw Error(ErrorKind::missing_column,
                  "dataset has no column for variable " + name);
    }
    column_of[v] = static_cast<int>(it - data.columns.begin());
  }

  std::vector<std::vector<int>> parents(n);
  std::vector<std::vector<double>> counts(n);
  std::vector<int> cards(n);
  for (int v = 0; v < n; ++v) {
    parents[v] = skeleton.parent_indices(v);
    cards[v] = skeleton.cardinality(v);
    std::size_t rows = 1;
    for (int p : parents[v]) rows *= cards[p];
    counts[v].assign(rows * cards[v], 0.0);
  }

  std::vector<int> full(n, 0);
  for (const auto& row : data.rows) {
    if (row.size() != data.columns.size()) {
      throw Error(ErrorKind::format, "dataset row width does not match header");
    }
    for (int v = 0; v < n; ++v) {
      full[v] = skeleton.state_index(v, row[column_of[v]]);
    }
    for (int v = 0; v < n; ++v) {
      std::size_t r = 0;
      for (int p : parents[v]) r = r * cards[p] + full[p];
      counts[v][r * cards[v] + full[v]] += 1.0;
    }
  }

  CausalBayesianNetwork fitted;
  for (int v = 0; v < n; ++v) {
    const Variable& var = skeleton.variable(v);
    Cpt cpt;
    std::size_t rows = counts[v].size() / cards[v];
    std::vector<int> key(parents[v].size(), 0);
    std::vector<int> parent_cards;
    for (int p : parents[v]) parent_cards.push_back(cards[p]);
    for (std::size_t r = 0; r < rows; ++r) {
      double total = 0.0;
      for (int s = 0; s < cards[v]; ++s) total += counts[v][r * cards[v] + s];
      if (total == 0.0 && alpha == 0.0) {
        throw Error(ErrorKind::unestimable_row,
                    "no observations for variable " + var.name +
                        " under one parent configuration and alpha is 0");
      }
      std::vector<double> dist(cards[v]);
      for (int s = 0; s < cards[v]; ++s) {
        dist[s] = (counts[v][r * cards[v] + s] + alpha) /
                  (total + alpha * cards[v]);
      }
      cpt.rows.emplace(key, std::move(dist));
      detail::next_state(key, parent_cards);
    }
    fitted.add(var, std::move(cpt));
  }
  return fitted;
}

}  // namespace causalkg
