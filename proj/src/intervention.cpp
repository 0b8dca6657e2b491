#include "causalkg/intervention.hpp"

namespace causalkg {

InterventionalModel do_transform(const CausalBayesianNetwork& model,
                                 const Assignment& do_set) {
  // resolve names first so a bad do-set fails before any copying
  std::map<int, int> forced;
  for (const auto& [name, label] : do_set) {
    int v = model.require_index(name);
    forced[v] = model.state_index(v, label);
  }

  InterventionalModel out;
  out.do_set = do_set;
  for (int i = 0; i < model.size(); ++i) {
    Variable v = model.variable(i);
    auto it = forced.find(i);
    if (it == forced.end()) {
      out.model.add(std::move(v), model.cpt(i));
      continue;
    }
    v.parents.clear();
    std::vector<double> point(v.states.size(), 0.0);
    point[it->second] = 1.0;
    Cpt cpt;
    cpt.rows.emplace(std::vector<int>{}, std::move(point));
    out.model.add(std::move(v), std::move(cpt));
  }
  return out;
}

Distribution interventional_query(const CausalBayesianNetwork& model,
                                  const std::vector<std::string>& targets,
                                  const Assignment& do_set,
                                  const Assignment& evidence,
                                  Backend backend) {
  for (const auto& [name, label] : do_set) {
    if (evidence.count(name)) {
      throw Error(ErrorKind::invalid_query,
                  "variable " + name + " appears in both do() and evidence");
    }
    for (const auto& t : targets) {
      if (t == name) {
        throw Error(ErrorKind::invalid_query,
                    "variable " + name + " appears as both target and do()");
      }
    }
  }
  auto surgery = do_transform(model, do_set);
  return query(surgery.model, targets, evidence, backend);
}

}  // namespace causalkg
