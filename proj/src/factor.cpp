#include "causalkg/factor.hpp"

#include <algorithm>
#include <cassert>
#include <cstddef>

namespace causalkg {

Factor Factor::unit() { return Factor{{}, {}, {1.0}}; }

std::size_t Factor::index_of(const std::vector<int>& states) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < scope.size(); ++i) {
    idx = idx * cards[i] + states[i];
  }
  return idx;
}

double Factor::value_at(const std::vector<int>& full_assignment) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < scope.size(); ++i) {
    idx = idx * cards[i] + full_assignment[scope[i]];
  }
  return table[idx];
}

Factor factor_product(const Factor& a, const Factor& b) {
  Factor out;
  std::vector<int> pos_a, pos_b;  // scope position in a/b per output position
  {
    std::size_t i = 0, j = 0;
    while (i < a.scope.size() || j < b.scope.size()) {
      int va = i < a.scope.size() ? a.scope[i] : -1;
      int vb = j < b.scope.size() ? b.scope[j] : -1;
      if (vb < 0 || (va >= 0 && va < vb)) {
        out.scope.push_back(va);
        out.cards.push_back(a.cards[i]);
        pos_a.push_back(static_cast<int>(i++));
        pos_b.push_back(-1);
      } else if (va < 0 || vb < va) {
        out.scope.push_back(vb);
        out.cards.push_back(b.cards[j]);
        pos_a.push_back(-1);
        pos_b.push_back(static_cast<int>(j++));
      } else {
        assert(a.cards[i] == b.cards[j]);
        out.scope.push_back(va);
        out.cards.push_back(a.cards[i]);
        pos_a.push_back(static_cast<int>(i++));
        pos_b.push_back(static_cast<int>(j++));
      }
    }
  }
  std::size_t total = 1;
  for (int c : out.cards) total *= c;
  out.table.resize(total);

  std::vector<int> state(out.scope.size(), 0);
  std::vector<int> sa(a.scope.size(), 0), sb(b.scope.size(), 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    for (std::size_t k = 0; k < out.scope.size(); ++k) {
      if (pos_a[k] >= 0) sa[pos_a[k]] = state[k];
      if (pos_b[k] >= 0) sb[pos_b[k]] = state[k];
    }
    out.table[idx] = a.table[a.index_of(sa)] * b.table[b.index_of(sb)];
    for (int k = static_cast<int>(out.scope.size()) - 1; k >= 0; --k) {
      if (++state[k] < out.cards[k]) break;
      state[k] = 0;
    }
  }
  return out;
}

Factor factor_marginalize(const Factor& f, int variable) {
  std::size_t drop = 0;
  while (drop < f.scope.size() && f.scope[drop] != variable) ++drop;
  assert(drop < f.scope.size());

  Factor out;
  for (std::size_t i = 0; i < f.scope.size(); ++i) {
    if (i == drop) continue;
    out.scope.push_back(f.scope[i]);
    out.cards.push_back(f.cards[i]);
  }
  std::size_t total = 1;
  for (int c : out.cards) total *= c;
  out.table.assign(total, 0.0);

  std::vector<int> state(f.scope.size(), 0);
  std::vector<int> reduced(out.scope.size(), 0);
  for (std::size_t idx = 0; idx < f.table.size(); ++idx) {
    std::size_t r = 0;
    for (std::size_t i = 0; i < f.scope.size(); ++i) {
      if (i != drop) reduced[r++] = state[i];
    }
    out.table[out.index_of(reduced)] += f.table[idx];
    for (int k = static_cast<int>(f.scope.size()) - 1; k >= 0; --k) {
      if (++state[k] < f.cards[k]) break;
      state[k] = 0;
    }
  }
  return out;
}

Factor factor_reduce(const Factor& f, int variable, int state) {
  std::size_t drop = 0;
  while (drop < f.scope.size() && f.scope[drop] != variable) ++drop;
  if (drop == f.scope.size()) return f;  // variable not in scope

  Factor out;
  for (std::size_t i = 0; i < f.scope.size(); ++i) {
    if (i == drop) continue;
    out.scope.push_back(f.scope[i]);
    out.cards.push_back(f.cards[i]);
  }
  std::size_t total = 1;
  for (int c : out.cards) total *= c;
  out.table.resize(total);

  std::vector<int> full(f.scope.size(), 0);
  std::vector<int> reduced(out.scope.size(), 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t r = 0;
    for (std::size_t i = 0; i < f.scope.size(); ++i) {
      full[i] = (i == drop) ? state : reduced[r++];
    }
    out.table[idx] = f.table[f.index_of(full)];
    for (int k = static_cast<int>(out.scope.size()) - 1; k >= 0; --k) {
      if (++reduced[k] < out.cards[k]) break;
      reduced[k] = 0;
    }
  }
  return out;
}

double factor_total(const Factor& f) {
  double sum = 0.0;
  for (double v : f.table) sum += v;
  return sum;
}

}  // namespace causalkg
