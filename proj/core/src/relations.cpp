#include "pbisim/relations.hpp"

#include <algorithm>

#include "pbisim/linear.hpp"

namespace pbisim {

bool kind_is_weak(relation_kind k) {
  switch (k) {
    case relation_kind::weak_prob_bisim:
    case relation_kind::weak_prob_sim:
    case relation_kind::forward_sim:
    case relation_kind::failure_sim:
      return true;
    default:
      return false;
  }
}

bool kind_is_bisim(relation_kind k) {
  return k == relation_kind::strong_prob_bisim ||
         k == relation_kind::weak_prob_bisim ||
         k == relation_kind::hj90_bisim;
}

bool kind_is_state_dist(relation_kind k) {
  return k == relation_kind::forward_sim || k == relation_kind::failure_sim;
}

bool kind_is_combined(relation_kind k) {
  return k != relation_kind::hj90_bisim && k != relation_kind::jl91_sim;
}

std::string kind_name(relation_kind k) {
  switch (k) {
    case relation_kind::strong_prob_bisim: return "strong-bisim";
    case relation_kind::strong_prob_sim: return "strong-sim";
    case relation_kind::weak_prob_bisim: return "weak-bisim";
    case relation_kind::weak_prob_sim: return "weak-sim";
    case relation_kind::forward_sim: return "forward-sim";
    case relation_kind::failure_sim: return "failure-sim";
    case relation_kind::hj90_bisim: return "hj90-bisim";
    case relation_kind::jl91_sim: return "jl91-sim";
  }
  return "?";
}

std::optional<relation_kind> kind_from_name(const std::string& name) {
  for (relation_kind k : all_relation_kinds())
    if (kind_name(k) == name) return k;
  return std::nullopt;
}

std::vector<relation_kind> all_relation_kinds() {
  return {relation_kind::strong_prob_bisim, relation_kind::strong_prob_sim,
          relation_kind::weak_prob_bisim,   relation_kind::weak_prob_sim,
          relation_kind::forward_sim,       relation_kind::failure_sim,
          relation_kind::hj90_bisim,        relation_kind::jl91_sim};
}

std::vector<relation_kind> state_state_kinds() {
  return {relation_kind::strong_prob_bisim, relation_kind::strong_prob_sim,
          relation_kind::weak_prob_bisim,   relation_kind::weak_prob_sim,
          relation_kind::hj90_bisim,        relation_kind::jl91_sim};
}

namespace {

/// Joint feasibility of "exists T in hull(succ): move lift(rel) T":
/// convex coefficients over the successor generators combined with
/// weight-function flow constraints in a single exact LP. With
/// transpose set, the edge (u, v) is allowed iff rel contains (v, u).
bool match_move(const dist& move, const polytope& succ,
                const std::set<std::pair<state_id, state_id>>& rel,
                bool transpose) {
  const auto& gens = succ.generators();
  std::set<state_id> cols;
  for (auto& g : gens)
    for (auto& [v, w] : g.entries()) cols.insert(v);

  linear_system sys;
  int lambda = sys.add_vars(static_cast<int>(gens.size()));
  std::vector<std::pair<int, rat>> one_row;
  for (std::size_t j = 0; j < gens.size(); ++j)
    one_row.emplace_back(lambda + static_cast<int>(j), rat_one());
  sys.add_eq(one_row, rat_one());

  std::map<std::pair<state_id, state_id>, int> wvar;
  for (auto& [u, mass] : move.entries()) {
    std::vector<std::pair<int, rat>> row;
    for (state_id v : cols) {
      bool allowed = transpose ? rel.count({v, u}) > 0 : rel.count({u, v}) > 0;
      if (!allowed) continue;
      int var = sys.add_var();
      wvar[{u, v}] = var;
      row.emplace_back(var, rat_one());
    }
    sys.add_eq(row, mass);
  }
  for (state_id v : cols) {
    std::vector<std::pair<int, rat>> row;
    for (auto& [u, mass] : move.entries()) {
      auto it = wvar.find({u, v});
      if (it != wvar.end()) row.emplace_back(it->second, rat_one());
    }
    for (std::size_t j = 0; j < gens.size(); ++j) {
      rat w = gens[j](v);
      if (!is_zero(w))
        row.emplace_back(lambda + static_cast<int>(j), rat(-w));
    }
    sys.add_eq(row, rat_zero());
  }
  return sys.feasible();
}

struct failure {
  bool reverse;
  action_id act;
  dist move;
};

}  // namespace

const removal_event* relation_result::death(state_id s, state_id t) const {
  for (auto& e : removals)
    if (e.left == s && e.right == t) return &e;
  return nullptr;
}

relation_result compute_relation(const plts& sys, relation_kind kind) {
  if (kind_is_state_dist(kind))
    throw error(kind_name(kind) +
                " relates states to distributions; use check_sd_relation");
  std::optional<weak_trans_table> wt;
  if (kind_is_weak(kind)) wt.emplace(sys);

  int n = sys.n_states();
  int m = sys.n_actions();

  // Successor polytopes of the point distributions, per (state, action).
  std::vector<std::vector<std::optional<polytope>>> succ(n);
  if (kind_is_combined(kind)) {
    for (state_id t = 0; t < n; ++t) {
      succ[t].resize(m);
      for (action_id a = 0; a < m; ++a)
        succ[t][a] = kind_is_weak(kind)
                         ? wt->weak_successors(dist::point(t), a)
                         : strong_successors(sys, dist::point(t), a);
    }
  }

  std::set<std::pair<state_id, state_id>> rel;
  for (state_id s = 0; s < n; ++s)
    for (state_id t = 0; t < n; ++t) rel.insert({s, t});

  // One side's move must be matched within the other side's successor
  // set under the current relation; combined kinds match against the
  // whole polytope, HJ90/JL91 against single transitions.
  auto check_pair = [&](state_id s, state_id t) -> std::optional<failure> {
    auto matches = [&](const dist& move, state_id other, action_id a,
                       bool transpose) {
      if (kind_is_combined(kind)) {
        const auto& sp = succ[other][a];
        return sp.has_value() && match_move(move, *sp, rel, transpose);
      }
      for (const dist& target : sys.targets(other, a))
        if (match_move(move, polytope({target}), rel, transpose)) return true;
      return false;
    };
    for (action_id a = 0; a < m; ++a)
      for (const dist& move : sys.targets(s, a))
        if (!matches(move, t, a, false)) return failure{false, a, move};
    if (kind_is_bisim(kind)) {
      for (action_id a = 0; a < m; ++a)
        for (const dist& move : sys.targets(t, a))
          if (!matches(move, s, a, true)) return failure{true, a, move};
    }
    return std::nullopt;
  };

  relation_result res{kind, state_relation(n, n), {}, {}};
  int pass = 0;
  int index = 0;
  while (true) {
    ++pass;
    bool changed = false;
    for (state_id s = 0; s < n; ++s)
      for (state_id t = 0; t < n; ++t) {
        if (!rel.count({s, t})) continue;
        auto fail = check_pair(s, t);
        if (!fail) continue;
        rel.erase({s, t});
        res.removals.push_back(removal_event{s, t, fail->reverse, fail->act,
                                             fail->move, pass, index++});
        changed = true;
      }
    state_relation snap(n, n);
    for (auto& [s, t] : rel) snap.add(s, t);
    res.trace.push_back(snap);
    if (!changed) break;
  }
  res.pairs = res.trace.back();
  return res;
}

// --------------------------------------------------- sd_relation_context

sd_relation_context::sd_relation_context(const plts& sys, relation_kind kind)
    : sys_(sys), kind_(kind), table_(sys) {
  if (!kind_is_state_dist(kind))
    throw error(kind_name(kind) + " is not a state-distribution kind");
  int n = sys.n_states();

  // Candidate universe: point distributions plus every weak-successor
  // generator reachable from them. The final per-state sets are convex
  // hulls of the unrefuted candidates.
  std::set<dist> uni;
  for (state_id v = 0; v < n; ++v) {
    uni.insert(dist::point(v));
    for (const dist& g : table_.tau_closure(v).generators()) uni.insert(g);
    for (action_id a = 0; a < sys.n_actions(); ++a) {
      auto p = table_.weak_successors(dist::point(v), a);
      if (!p) continue;
      for (const dist& g : p->generators()) uni.insert(g);
    }
  }
  std::vector<dist> universe(uni.begin(), uni.end());
  per_state_.assign(n, universe);
  stamp_.assign(n, 0);

  // The states whose candidate hulls a state's clauses consult.
  std::vector<std::set<state_id>> refs(n);
  for (auto& t : sys.transitions())
    for (auto& [v, w] : t.target.entries()) refs[t.src].insert(v);

  std::vector<int> last_check(n, -1);
  int round = 0;
  while (true) {
    ++round;
    bool changed = false;
    for (state_id u = 0; u < n; ++u) {
      bool dirty = last_check[u] < 0;
      for (state_id v : refs[u])
        if (stamp_[v] >= last_check[u]) dirty = true;
      if (!dirty) continue;
      last_check[u] = round;
      auto& cands = per_state_[u];
      std::vector<dist> kept;
      kept.reserve(cands.size());
      for (const dist& g : cands) {
        if (clauses_hold(u, g))
          kept.push_back(g);
      }
      if (kept.size() != cands.size()) {
        cands = std::move(kept);
        stamp_[u] = round;
        changed = true;
      }
    }
    if (!changed) break;
  }
}

const polytope* sd_relation_context::weak_succ(const dist& g,
                                               action_id a) const {
  auto key = std::make_pair(g, a);
  auto it = succ_cache_.find(key);
  if (it == succ_cache_.end())
    it = succ_cache_.emplace(key, table_.weak_successors(g, a)).first;
  return it->second ? &*it->second : nullptr;
}

bool sd_relation_context::clauses_hold(state_id u, const dist& g) const {
  // Clause 1: every move u -a-> D has a weak a-successor of g that is a
  // D-weighted combination of currently-unrefuted candidates.
  for (action_id a = 0; a < sys_.n_actions(); ++a) {
    for (const dist& move : sys_.targets(u, a)) {
      const polytope* sp = weak_succ(g, a);
      if (!sp) return false;
      const auto& gens = sp->generators();
      std::set<state_id> space;
      for (auto& sg : gens)
        for (auto& [y, w] : sg.entries()) space.insert(y);
      for (auto& [v, w] : move.entries())
        for (auto& cand : per_state_[v])
          for (auto& [y, cw] : cand.entries()) space.insert(y);

      linear_system lp;
      int lambda = lp.add_vars(static_cast<int>(gens.size()));
      std::vector<std::pair<int, rat>> one;
      for (std::size_t j = 0; j < gens.size(); ++j)
        one.emplace_back(lambda + static_cast<int>(j), rat_one());
      lp.add_eq(one, rat_one());

      struct blk {
        state_id v;
        int base;
        const std::vector<dist>* cands;
      };
      std::vector<blk> blocks;
      for (auto& [v, mass] : move.entries()) {
        const auto& cands = per_state_[v];
        int base = lp.add_vars(static_cast<int>(cands.size()));
        std::vector<std::pair<int, rat>> row;
        for (std::size_t k = 0; k < cands.size(); ++k)
          row.emplace_back(base + static_cast<int>(k), rat_one());
        lp.add_eq(row, mass);
        blocks.push_back({v, base, &cands});
      }
      for (state_id y : space) {
        std::vector<std::pair<int, rat>> row;
        for (auto& b : blocks)
          for (std::size_t k = 0; k < b.cands->size(); ++k) {
            rat w = (*b.cands)[k](y);
            if (!is_zero(w)) row.emplace_back(b.base + static_cast<int>(k), w);
          }
        for (std::size_t j = 0; j < gens.size(); ++j) {
          rat w = gens[j](y);
          if (!is_zero(w))
            row.emplace_back(lambda + static_cast<int>(j), rat(-w));
        }
        lp.add_eq(row, rat_zero());
      }
      if (!lp.feasible()) return false;
    }
  }
  // Clause 2 (failure simulation only): refusals of u must be weakly
  // reachable from g. The maximal refused set suffices.
  if (kind_ == relation_kind::failure_sim && !sys_.enables(u, tau_action)) {
    if (!table_.refusal_reachable(g, sys_.refused_actions(u))) return false;
  }
  return true;
}

bool sd_relation_context::related(state_id s, const dist& theta) const {
  if (s < 0 || s >= sys_.n_states()) throw error("unknown state");
  return clauses_hold(s, theta);
}

state_dist_relation sd_relation_context::snapshot() const {
  state_dist_relation r;
  for (state_id u = 0; u < sys_.n_states(); ++u)
    r.per_state[u] = per_state_[u];
  return r;
}

bool check_sd_relation(const plts& sys, relation_kind kind, state_id s,
                       const dist& theta) {
  return sd_relation_context(sys, kind).related(s, theta);
}

// ------------------------------------------------------------ distinguish

formula distinguish(const plts& sys, const relation_result& bisim, state_id s,
                    state_id t) {
  if (bisim.kind != relation_kind::strong_prob_bisim)
    throw error("distinguishing formulae are built from strong-bisim traces");
  if (bisim.related(s, t))
    throw error("states " + sys.state_name(s) + " and " + sys.state_name(t) +
                " are strongly bisimilar");

  // Recursion over the removal log. For a pair that died because a move
  // of the left state was unmatched, the formula says "I can do this
  // move into pieces that only look like states still related at that
  // time"; the right state refutes it. Reverse removals negate the
  // same construction for the right state's unmatched move.
  std::map<std::pair<state_id, state_id>, formula> memo;
  auto build = [&](auto&& self, state_id u, state_id v) -> formula {
    auto key = std::make_pair(u, v);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const removal_event* ev = bisim.death(u, v);
    if (!ev) throw error("internal: no removal event for a separated pair");
    std::vector<std::pair<rat, formula>> parts;
    for (auto& [w, mass] : ev->move.entries()) {
      std::vector<formula> conj;
      for (auto& e : bisim.removals) {
        if (e.index >= ev->index) break;
        if (!ev->reverse && e.left == w)
          conj.push_back(self(self, e.left, e.right));
        if (ev->reverse && e.right == w)
          conj.push_back(f_neg(self(self, e.left, e.right)));
      }
      parts.emplace_back(mass, f_down(f_conj(std::move(conj))));
    }
    formula core =
        f_diamond(sys.action_name(ev->act), f_oplus_w(std::move(parts)));
    formula out = ev->reverse ? f_neg(core) : core;
    memo.emplace(key, out);
    return out;
  };
  return build(build, s, t);
}

formula distinguish(const plts& sys, state_id s, state_id t) {
  return distinguish(
      sys, compute_relation(sys, relation_kind::strong_prob_bisim), s, t);
}

}  // namespace pbisim
