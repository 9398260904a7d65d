#include "pbisim/weak.hpp"

#include <algorithm>
#include <set>

namespace pbisim {

std::vector<dist> per_state_combinations(
    const dist& d, const std::vector<std::vector<dist>>& options_by_state) {
  const auto& entries = d.entries();
  std::vector<dist> out;
  std::vector<std::size_t> pick(entries.size(), 0);
  while (true) {
    std::vector<std::pair<rat, dist>> parts;
    parts.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i)
      parts.emplace_back(entries[i].second,
                         options_by_state[entries[i].first][pick[i]]);
    out.push_back(convex_combine(parts));
    std::size_t i = 0;
    for (; i < entries.size(); ++i) {
      if (++pick[i] < options_by_state[entries[i].first].size()) break;
      pick[i] = 0;
    }
    if (i == entries.size()) break;
  }
  return out;
}

std::optional<polytope> strong_successors(const plts& sys, const dist& d,
                                          action_id a) {
  std::vector<std::vector<dist>> options(sys.n_states());
  for (auto& [s, w] : d.entries()) {
    options[s] = sys.targets(s, a);
    if (options[s].empty()) return std::nullopt;
  }
  return polytope::pruned(per_state_combinations(d, options));
}

weak_trans_table::weak_trans_table(const plts& sys,
                                   unsigned long max_iterations)
    : sys_(sys) {
  sys.require_divergence_free();
  if (max_iterations == 0) {
    unsigned long maxbranch = 1;
    for (state_id s = 0; s < sys.n_states(); ++s)
      maxbranch = std::max(
          maxbranch,
          static_cast<unsigned long>(sys.targets(s, tau_action).size()));
    unsigned long exponent =
        std::min<unsigned long>(62, maxbranch * sys.n_states());
    max_iterations = 1ul << exponent;
  }

  // Per-state tau-hat options: stay or take one tau-transition.
  std::vector<std::vector<dist>> options(sys.n_states());
  for (state_id s = 0; s < sys.n_states(); ++s) {
    options[s].push_back(dist::point(s));
    for (auto& t : sys.targets(s, tau_action)) options[s].push_back(t);
  }

  per_state_.reserve(sys.n_states());
  for (state_id s = 0; s < sys.n_states(); ++s) {
    std::vector<dist> gens{dist::point(s)};
    std::set<dist> seen(gens.begin(), gens.end());
    unsigned long iter = 0;
    while (true) {
      if (++iter > max_iterations)
        throw error("weak transition fixpoint for state '" +
                    sys.state_name(s) + "' exceeded the iteration cap of " +
                    std::to_string(max_iterations));
      std::vector<dist> fresh;
      for (const dist& g : gens) {
        for (dist& succ : per_state_combinations(g, options)) {
          if (seen.count(succ)) continue;
          seen.insert(succ);
          if (!polytope(gens).contains(succ)) fresh.push_back(std::move(succ));
        }
      }
      if (fresh.empty()) break;
      for (auto& g : fresh) gens.push_back(std::move(g));
      polytope p = polytope::pruned(std::move(gens));
      gens = p.generators();
    }
    per_state_.push_back(polytope::pruned(std::move(gens)));
  }
}

polytope weak_trans_table::tau_closure(const dist& d) const {
  std::vector<std::vector<dist>> options(sys_.n_states());
  for (auto& [s, w] : d.entries()) options[s] = per_state_[s].generators();
  return polytope::pruned(per_state_combinations(d, options));
}

std::optional<polytope> weak_trans_table::weak_successors(const dist& d,
                                                          action_id a) const {
  if (a == tau_action) return tau_closure(d);
  polytope before = tau_closure(d);
  // Middle strong a-step. Only generators fully supported on a-enabled
  // states can take it; intermediate hull points supported there are
  // convex combinations of exactly those generators.
  std::vector<dist> mids;
  for (const dist& g : before.generators()) {
    bool enabled = true;
    for (auto& [s, w] : g.entries())
      if (!sys_.enables(s, a)) {
        enabled = false;
        break;
      }
    if (!enabled) continue;
    std::vector<std::vector<dist>> options(sys_.n_states());
    for (auto& [s, w] : g.entries()) options[s] = sys_.targets(s, a);
    for (dist& m : per_state_combinations(g, options))
      mids.push_back(std::move(m));
  }
  if (mids.empty()) return std::nullopt;
  polytope mid = polytope::pruned(std::move(mids));
  std::vector<dist> finals;
  for (const dist& m : mid.generators())
    for (const dist& f : tau_closure(m).generators()) finals.push_back(f);
  return polytope::pruned(std::move(finals));
}

bool weak_trans_table::refusal_reachable(
    const dist& d, const std::vector<action_id>& A) const {
  polytope closure = tau_closure(d);
  for (const dist& g : closure.generators())
    if (refuses(sys_, g, A)) return true;
  return false;
}

polytope weak_tau_polytope(const plts& sys, state_id s) {
  return weak_trans_table(sys).tau_closure(s);
}

std::optional<polytope> weak_successors(const plts& sys, const dist& d,
                                        action_id a) {
  return weak_trans_table(sys).weak_successors(d, a);
}

bool refusal_reachable(const plts& sys, const dist& d,
                       const std::vector<action_id>& A) {
  return weak_trans_table(sys).refusal_reachable(d, A);
}

}  // namespace pbisim
