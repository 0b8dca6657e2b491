#include "causalkg/mediation.hpp"

#include <cmath>

#include "causalkg/intervention.hpp"

namespace causalkg {

namespace {

struct ResolvedSpec {
  int treatment;
  int outcome;
  int mediator;  // -1 when absent
  int t0;
  int t1;
  std::string t0_label;
  std::string t1_label;
};

ResolvedSpec resolve_spec(const CausalBayesianNetwork& model,
                          const EffectSpec& spec) {
  ResolvedSpec r;
  r.treatment = model.require_index(spec.treatment);
  r.outcome = model.require_index(spec.outcome);
  if (r.treatment == r.outcome) {
    throw Error(ErrorKind::invalid_query,
                "treatment and outcome must be distinct variables");
  }
  r.mediator = -1;
  if (spec.mediator) {
    r.mediator = model.require_index(*spec.mediator);
    if (r.mediator == r.treatment || r.mediator == r.outcome) {
      throw Error(ErrorKind::invalid_query,
                  "mediator must be distinct from treatment and outcome");
    }
  }
  const Variable& t = model.variable(r.treatment);
  if (spec.t0 || spec.t1) {
    if (!spec.t0 || !spec.t1) {
      throw Error(ErrorKind::invalid_query,
                  "t0 and t1 must be given together");
    }
    r.t0 = model.state_index(r.treatment, *spec.t0);
    r.t1 = model.state_index(r.treatment, *spec.t1);
  } else if (t.states.size() == 2) {
    r.t0 = 0;
    r.t1 = 1;
  } else {
    throw Error(ErrorKind::invalid_query,
                "treatment " + t.name +
                    " is not binary; explicit t0 and t1 are required");
  }
  if (r.t0 == r.t1) {
    throw Error(ErrorKind::invalid_query,
                "t0 and t1 must name different treatment states");
  }
  r.t0_label = t.states[r.t0];
  r.t1_label = t.states[r.t1];
  return r;
}

// Overlap of the cumulative slices [cum_a[a], cum_a[a+1]) and
// [cum_b[b], cum_b[b+1]): the mass of shared noise values that select state
// a in world A and state b in world B.
std::vector<double> couple_rows(const std::vector<double>& row_a,
                                const std::vector<double>& row_b) {
  const std::size_t c = row_a.size();
  std::vector<double> cum_a(c + 1, 0.0), cum_b(c + 1, 0.0);
  for (std::size_t s = 0; s < c; ++s) {
    cum_a[s + 1] = cum_a[s] + row_a[s];
    cum_b[s + 1] = cum_b[s] + row_b[s];
  }
  std::vector<double> pair(c * c, 0.0);
  for (std::size_t a = 0; a < c; ++a) {
    for (std::size_t b = 0; b < c; ++b) {
      double lo = std::max(cum_a[a], cum_b[b]);
      double hi = std::min(cum_a[a + 1], cum_b[b + 1]);
      if (hi > lo) pair[a * c + b] = hi - lo;
    }
  }
  return pair;
}

}  // namespace

CausalBayesianNetwork twin_model(const CausalBayesianNetwork& model,
                                 const std::string& treatment,
                                 const std::string& t_a,
                                 const std::string& t_b,
                                 const std::string& mediator) {
  const int t_idx = model.require_index(treatment);
  const int m_idx = model.require_index(mediator);
  const int ta = model.state_index(t_idx, t_a);
  const int tb = model.state_index(t_idx, t_b);
  auto compiled = detail::compile(model);

  CausalBayesianNetwork twin;
  for (int v = 0; v < model.size(); ++v) {
    const Variable& orig = model.variable(v);
    const int c = compiled.cards[v];
    Variable pair_var;
    pair_var.name = orig.name;
    for (int a = 0; a < c; ++a) {
      for (int b = 0; b < c; ++b) {
        pair_var.states.push_back("s" + std::to_string(a) + "_" +
                                  std::to_string(b));
        pair_var.state_values.push_back(orig.state_values[b]);
      }
    }

    Cpt cpt;
    if (v == t_idx) {
      // surgery in both worlds: parentless point mass on (t_a, t_b)
      std::vector<double> point(c * c, 0.0);
      point[ta * c + tb] = 1.0;
      cpt.rows.emplace(std::vector<int>{}, std::move(point));
      twin.add(std::move(pair_var), std::move(cpt));
      continue;
    }

    pair_var.parents = orig.parents;
    const auto& parents = compiled.parents[v];
    std::vector<int> pair_cards;
    for (int p : parents) {
      pair_cards.push_back(compiled.cards[p] * compiled.cards[p]);
    }
    std::vector<int> key(parents.size(), 0);
    while (true) {
      // split each pair-parent state into its world components
      std::size_t row_a = 0, row_b = 0;
      for (std::size_t i = 0; i < parents.size(); ++i) {
        int pc = compiled.cards[parents[i]];
        row_a = row_a * pc + key[i] / pc;
        row_b = row_b * pc + key[i] % pc;
      }
      std::vector<double> dist_a(compiled.tables[v].begin() + row_a * c,
                                 compiled.tables[v].begin() + (row_a + 1) * c);
      std::vector<double> pair_dist;
      if (v == m_idx) {
        // world B copies the world-A mediator value
        pair_dist.assign(c * c, 0.0);
        for (int a = 0; a < c; ++a) pair_dist[a * c + a] = dist_a[a];
      } else {
        std::vector<double> dist_b(
            compiled.tables[v].begin() + row_b * c,
            compiled.tables[v].begin() + (row_b + 1) * c);
        pair_dist = couple_rows(dist_a, dist_b);
      }
      cpt.rows.emplace(key, std::move(pair_dist));
      bool advanced = false;
      for (int k = static_cast<int>(key.size()) - 1; k >= 0; --k) {
        if (++key[k] < pair_cards[k]) {
          advanced = true;
          break;
        }
        key[k] = 0;
      }
      if (!advanced) break;
    }
    twin.add(std::move(pair_var), std::move(cpt));
  }
  return twin;
}

double twin_expected_outcome(const CausalBayesianNetwork& model,
                             const std::string& treatment,
                             const std::string& t_a, const std::string& t_b,
                             const std::string& mediator,
                             const std::string& outcome, Backend backend) {
  auto twin = twin_model(model, treatment, t_a, t_b, mediator);
  return expected_outcome(twin, outcome, {}, backend);
}

double expected_outcome(const CausalBayesianNetwork& model,
                        const std::string& outcome, const Assignment& do_set,
                        Backend backend) {
  if (do_set.count(outcome)) {
    throw Error(ErrorKind::invalid_query,
                "outcome " + outcome + " cannot be intervened on");
  }
  int y = model.require_index(outcome);
  Distribution dist =
      interventional_query(model, {outcome}, do_set, {}, backend);
  const auto& values = model.variable(y).state_values;
  double e = 0.0;
  for (std::size_t s = 0; s < dist.probabilities.size(); ++s) {
    e += values[s] * dist.probabilities[s];
  }
  return e;
}

EffectReport decompose(const CausalBayesianNetwork& model,
                       const EffectSpec& spec, Backend backend) {
  ResolvedSpec r = resolve_spec(model, spec);
  EffectReport report;
  report.spec = spec;
  report.spec.t0 = r.t0_label;
  report.spec.t1 = r.t1_label;
  report.outcome_encoding = model.variable(r.outcome).state_values;

  const bool has_mediator = r.mediator >= 0;
  if (!model.is_ancestor(r.treatment, r.outcome)) {
    report.warnings.push_back("treatment " + spec.treatment +
                              " is not an ancestor of outcome " +
                              spec.outcome + "; all effects are zero");
    report.tce = 0.0;
    if (has_mediator) {
      report.nde = 0.0;
      report.nie = 0.0;
      report.nie_reversed = 0.0;
    }
    return report;
  }

  const double e0 =
      expected_outcome(model, spec.outcome, {{spec.treatment, r.t0_label}},
                       backend);
  const double e1 =
      expected_outcome(model, spec.outcome, {{spec.treatment, r.t1_label}},
                       backend);
  report.tce = e1 - e0;

  if (has_mediator) {
    const bool on_path = model.is_ancestor(r.treatment, r.mediator) &&
                         model.is_ancestor(r.mediator, r.outcome);
    if (!on_path) {
      report.warnings.push_back(
          "mediator " + *spec.mediator +
          " is not on a directed path from " + spec.treatment + " to " +
          spec.outcome + "; indirect effect is zero");
      report.nde = report.tce;
      report.nie = 0.0;
      report.nie_reversed = 0.0;
    } else {
      // cross01 = E[Y(t1, M(t0))], cross10 = E[Y(t0, M(t1))]
      const double cross01 = twin_expected_outcome(
          model, spec.treatment, r.t0_label, r.t1_label, *spec.mediator,
          spec.outcome, backend);
      const double cross10 = twin_expected_outcome(
          model, spec.treatment, r.t1_label, r.t0_label, *spec.mediator,
          spec.outcome, backend);
      report.nde = cross01 - e0;
      report.nie = cross10 - e0;
      report.nie_reversed = cross01 - e1;
    }
    const double residual =
        report.tce - (*report.nde - *report.nie_reversed);
    if (std::abs(residual) >= kDecompositionTolerance) {
      throw Error(ErrorKind::decomposition_violation,
                  "effect decomposition identity violated (residual " +
                      std::to_string(residual) + ")");
    }
  }
  return report;
}

double total_causal_effect(const CausalBayesianNetwork& model,
                           const EffectSpec& spec, Backend backend) {
  EffectSpec tce_only = spec;
  tce_only.mediator.reset();
  return decompose(model, tce_only, backend).tce;
}

double natural_direct_effect(const CausalBayesianNetwork& model,
                             const EffectSpec& spec, Backend backend) {
  if (!spec.mediator) {
    throw Error(ErrorKind::missing_mediator,
                "natural direct effect needs a mediator");
  }
  return *decompose(model, spec, backend).nde;
}

double natural_indirect_effect(const CausalBayesianNetwork& model,
                               const EffectSpec& spec, Backend backend) {
  if (!spec.mediator) {
    throw Error(ErrorKind::missing_mediator,
                "natural indirect effect needs a mediator");
  }
  return *decompose(model, spec, backend).nie;
}

}  // namespace causalkg
