#ifndef PBISIM_RELATIONS_HPP
#define PBISIM_RELATIONS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pbisim/formula.hpp"
#include "pbisim/lifting.hpp"
#include "pbisim/plts.hpp"
#include "pbisim/weak.hpp"

namespace pbisim {

enum class relation_kind {
  strong_prob_bisim,
  strong_prob_sim,
  weak_prob_bisim,
  weak_prob_sim,
  forward_sim,
  failure_sim,
  hj90_bisim,  // matching by a single transition of the right state
  jl91_sim,
};

/// Weak semantics (requires a divergence-free system).
bool kind_is_weak(relation_kind k);
/// Symmetric transfer condition.
bool kind_is_bisim(relation_kind k);
/// Relates states to distributions rather than states to states.
bool kind_is_state_dist(relation_kind k);
/// Combined (lifted) matching; false for the HJ90/JL91 variants.
bool kind_is_combined(relation_kind k);

std::string kind_name(relation_kind k);
std::optional<relation_kind> kind_from_name(const std::string& name);
std::vector<relation_kind> all_relation_kinds();
std::vector<relation_kind> state_state_kinds();

/// One pair removal during refinement. When reverse is set, the right
/// state's move (under bisimulation kinds) had no lifted match.
struct removal_event {
  state_id left;
  state_id right;
  bool reverse;
  action_id act;
  dist move;
  int round;  // 1-based refinement pass
  int index;  // global removal order
};

struct relation_result {
  relation_kind kind;
  state_relation pairs;
  /// Certificate: snapshot after each refinement pass (a shrinking
  /// sequence ending in the fixpoint), plus the per-pair removal log.
  std::vector<state_relation> trace;
  std::vector<removal_event> removals;

  bool related(state_id s, state_id t) const { return pairs.related(s, t); }
  const removal_event* death(state_id s, state_id t) const;
};

/// Greatest relation of the given state-state kind, by iterated
/// refinement from the total relation. Pairs are processed in state
/// order each round; a pair is removed when some move of one side has
/// no lifted (or, for HJ90/JL91, single-transition) match against the
/// other side's successor polytope under the current relation.
relation_result compute_relation(const plts& sys, relation_kind kind);

/// Decision context for forward/failure simulation on one system.
/// Maintains per-state convex sets of candidate related distributions
/// (generator representation) and refines them by the definition's
/// clauses until stable; queries are then answered against the final
/// sets. Construction cost is paid once per (system, kind).
class sd_relation_context {
 public:
  sd_relation_context(const plts& sys, relation_kind kind);

  relation_kind kind() const { return kind_; }
  const plts& system() const { return sys_; }

  /// Does the state simulate (forward/failure) the distribution?
  bool related(state_id s, const dist& theta) const;

  /// Final unrefuted generator lists, one per state.
  state_dist_relation snapshot() const;

 private:
  bool clauses_hold(state_id u, const dist& g) const;
  const polytope* weak_succ(const dist& g, action_id a) const;

  const plts& sys_;
  relation_kind kind_;
  weak_trans_table table_;
  std::vector<std::vector<dist>> per_state_;
  std::vector<int> stamp_;  // refinement round of last change, per state
  mutable std::map<std::pair<dist, action_id>, std::optional<polytope>>
      succ_cache_;
};

bool check_sd_relation(const plts& sys, relation_kind kind, state_id s,
                       const dist& theta);

/// Fixpoint-free formula satisfied by point(s) but not by point(t)
/// under the strong semantics, built by recursion over the refinement
/// trace of strong probabilistic bisimulation. Throws when the states
/// are bisimilar.
formula distinguish(const plts& sys, state_id s, state_id t);
formula distinguish(const plts& sys, const relation_result& bisim, state_id s,
                    state_id t);

}  // namespace pbisim

#endif
