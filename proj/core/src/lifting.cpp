#include "pbisim/lifting.hpp"

#include <algorithm>
#include <deque>

#include "pbisim/linear.hpp"

namespace pbisim {

// ------------------------------------------------------ state_relation

void state_relation::add(state_id s, state_id t) {
  if (s < 0 || s >= left_ || t < 0 || t >= right_)
    throw error("relation pair outside declared state spaces");
  pairs_.insert({s, t});
}

state_relation state_relation::identity(int n) {
  state_relation r(n, n);
  for (state_id s = 0; s < n; ++s) r.add(s, s);
  return r;
}

state_relation state_relation::total(int left, int right) {
  state_relation r(left, right);
  for (state_id s = 0; s < left; ++s)
    for (state_id t = 0; t < right; ++t) r.add(s, t);
  return r;
}

state_relation state_relation::inverse() const {
  state_relation r(right_, left_);
  for (auto& [s, t] : pairs_) r.add(t, s);
  return r;
}

bool state_relation::is_reflexive() const {
  if (left_ != right_) return false;
  for (state_id s = 0; s < left_; ++s)
    if (!related(s, s)) return false;
  return true;
}

bool state_relation::is_symmetric() const {
  if (left_ != right_) return false;
  for (auto& [s, t] : pairs_)
    if (!related(t, s)) return false;
  return true;
}

bool state_relation::is_transitive() const {
  if (left_ != right_) return false;
  for (auto& [s, t] : pairs_)
    for (auto& [u, v] : pairs_)
      if (t == u && !related(s, v)) return false;
  return true;
}

bool state_relation::is_equivalence() const {
  return is_reflexive() && is_symmetric() && is_transitive();
}

bool state_relation::is_preorder() const {
  return is_reflexive() && is_transitive();
}

// ----------------------------------------------------- weight_function

rat weight_function::row_sum(state_id s) const {
  rat sum = rat_zero();
  for (auto& [u, v, w] : entries)
    if (u == s) sum += w;
  return sum;
}

rat weight_function::col_sum(state_id t) const {
  rat sum = rat_zero();
  for (auto& [u, v, w] : entries)
    if (v == t) sum += w;
  return sum;
}

bool verify_weight_function(const state_relation& r, const dist& d,
                            const dist& t, const weight_function& w) {
  std::map<state_id, rat> rows, cols;
  for (auto& [u, v, x] : w.entries) {
    if (!is_positive(x)) return false;
    if (!r.related(u, v)) return false;
    rows[u] += x;
    cols[v] += x;
  }
  for (auto& [s, p] : d.entries())
    if (rows[s] != p) return false;
  for (auto& [s, p] : rows)
    if (p != d(s)) return false;
  for (auto& [u, p] : t.entries())
    if (cols[u] != p) return false;
  for (auto& [u, p] : cols)
    if (p != t(u)) return false;
  return true;
}

// ----------------------------------------------------------- lift_check

std::optional<weight_function> lift_check(const state_relation& r,
                                          const dist& d, const dist& t) {
  for (auto& [s, w] : d.entries())
    if (s >= r.left_size()) throw error("lift_check: support outside left space");
  for (auto& [s, w] : t.entries())
    if (s >= r.right_size())
      throw error("lift_check: support outside right space");

  // Max-flow network: 0 = source, 1..nr = rows (support of d, state
  // order), nr+1..nr+nc = columns (support of t), nr+nc+1 = sink.
  std::vector<state_id> rows = d.support();
  std::vector<state_id> cols = t.support();
  int nr = static_cast<int>(rows.size());
  int nc = static_cast<int>(cols.size());
  int n = nr + nc + 2;
  int source = 0, sink = n - 1;
  // cap[u][v]: residual capacity. Relation edges get capacity 2 (any
  // finite bound above 1 acts as infinity here).
  std::vector<std::vector<rat>> cap(n, std::vector<rat>(n, rat_zero()));
  for (int i = 0; i < nr; ++i) cap[source][1 + i] = d(rows[i]);
  for (int j = 0; j < nc; ++j) cap[1 + nr + j][sink] = t(cols[j]);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j)
      if (r.related(rows[i], cols[j])) cap[1 + i][1 + nr + j] = rat(2);

  rat flow = rat_zero();
  while (true) {
    // BFS shortest augmenting path; neighbours in index order keeps
    // routing deterministic (states were sorted above).
    std::vector<int> prev(n, -1);
    prev[source] = source;
    std::deque<int> queue{source};
    while (!queue.empty() && prev[sink] < 0) {
      int u = queue.front();
      queue.pop_front();
      for (int v = 0; v < n; ++v) {
        if (prev[v] >= 0 || !is_positive(cap[u][v])) continue;
        prev[v] = u;
        queue.push_back(v);
      }
    }
    if (prev[sink] < 0) break;
    rat bottleneck;
    bool first = true;
    for (int v = sink; v != source; v = prev[v]) {
      const rat& c = cap[prev[v]][v];
      if (first || c < bottleneck) bottleneck = c;
      first = false;
    }
    for (int v = sink; v != source; v = prev[v]) {
      cap[prev[v]][v] -= bottleneck;
      cap[v][prev[v]] += bottleneck;
    }
    flow += bottleneck;
  }
  if (flow != 1) return std::nullopt;

  weight_function w;
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) {
      if (!r.related(rows[i], cols[j])) continue;
      rat sent(rat(2) - cap[1 + i][1 + nr + j]);
      if (is_positive(sent)) w.entries.emplace_back(rows[i], cols[j], sent);
    }
  return w;
}

bool lift_check_equivalence(const state_relation& r, const dist& d,
                            const dist& t) {
  if (r.left_size() != r.right_size())
    throw error("lift_check_equivalence: relation spans two state spaces");
  if (!r.is_reflexive())
    throw error("lift_check_equivalence: relation is not reflexive");
  if (!r.is_symmetric())
    throw error("lift_check_equivalence: relation is not symmetric");
  if (!r.is_transitive())
    throw error("lift_check_equivalence: relation is not transitive");

  // Class masses must agree: D(C) = T(C) for every equivalence class C.
  int n = r.left_size();
  std::vector<int> cls(n, -1);
  int next = 0;
  for (state_id s = 0; s < n; ++s) {
    if (cls[s] >= 0) continue;
    cls[s] = next;
    for (state_id u = s + 1; u < n; ++u)
      if (r.related(s, u)) cls[u] = next;
    ++next;
  }
  std::vector<rat> dm(next, rat_zero()), tm(next, rat_zero());
  for (auto& [s, w] : d.entries()) dm[cls[s]] += w;
  for (auto& [s, w] : t.entries()) tm[cls[s]] += w;
  for (int c = 0; c < next; ++c)
    if (dm[c] != tm[c]) return false;
  return true;
}

// -------------------------------------------------------- lift_check_sd

bool lift_check_sd(const state_dist_relation& r, const dist& d,
                   const dist& t) {
  linear_system sys;
  std::map<state_id, rat> target;  // image constraint rows
  for (auto& [s, w] : t.entries()) target[s] = w;
  struct block {
    state_id s;
    const std::vector<dist>* gens;
    int base;
  };
  std::vector<block> blocks;
  for (auto& [s, w] : d.entries()) {
    auto it = r.per_state.find(s);
    if (it == r.per_state.end())
      throw error("lift_check_sd: no related set for state in the support");
    for (auto& g : it->second)
      for (auto& [v, gw] : g.entries()) target.try_emplace(v, rat_zero());
    blocks.push_back(
        {s, &it->second, sys.add_vars(static_cast<int>(it->second.size()))});
  }
  // sum_k lambda_{s,k} = D(s): the related member for s, scaled by the
  // mass D(s) it carries.
  for (auto& blk : blocks) {
    std::vector<std::pair<int, rat>> row;
    for (std::size_t k = 0; k < blk.gens->size(); ++k)
      row.emplace_back(blk.base + static_cast<int>(k), rat_one());
    sys.add_eq(row, d(blk.s));
  }
  // Image must recompose to T exactly.
  for (auto& [v, mass] : target) {
    std::vector<std::pair<int, rat>> row;
    for (auto& blk : blocks)
      for (std::size_t k = 0; k < blk.gens->size(); ++k) {
        rat w = (*blk.gens)[k](v);
        if (!is_zero(w)) row.emplace_back(blk.base + static_cast<int>(k), w);
      }
    sys.add_eq(row, mass);
  }
  return sys.feasible();
}

// ------------------------------------------------------------ decompose

std::vector<std::tuple<rat, state_id, state_id>> decompose(
    const dist& d, const dist& t, const weight_function& w) {
  std::map<state_id, rat> rows, cols;
  for (auto& [u, v, x] : w.entries) {
    if (!is_positive(x)) throw error("decompose: nonpositive witness entry");
    rows[u] += x;
    cols[v] += x;
  }
  for (auto& [s, p] : d.entries())
    if (rows[s] != p) throw error("decompose: witness row sums do not match");
  if (rows.size() != d.entries().size())
    throw error("decompose: witness row sums do not match");
  for (auto& [s, p] : t.entries())
    if (cols[s] != p)
      throw error("decompose: witness column sums do not match");
  if (cols.size() != t.entries().size())
    throw error("decompose: witness column sums do not match");

  std::vector<std::tuple<rat, state_id, state_id>> out;
  for (auto& [u, v, x] : w.entries) out.emplace_back(x, u, v);
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) {
              if (std::get<1>(a) != std::get<1>(b))
                return std::get<1>(a) < std::get<1>(b);
              return std::get<2>(a) < std::get<2>(b);
            });
  return out;
}

}  // namespace pbisim
