#ifndef PBISIM_WEAK_HPP
#define PBISIM_WEAK_HPP

#include <optional>
#include <vector>

#include "pbisim/plts.hpp"
#include "pbisim/polytope.hpp"

namespace pbisim {

/// Generator representation of { T : D -a-> T } under the lifted
/// transition relation: every support state splits its mass over its
/// own a-transitions. Empty (nullopt) iff some support state has no
/// a-move.
std::optional<polytope> strong_successors(const plts& sys, const dist& d,
                                          action_id a);

/// Cached weak-transition successor polytopes of a divergence-free
/// pLTS. Construction runs the generator fixpoint for every state's
/// tau-hat closure once; the table is immutable afterwards and can be
/// shared.
class weak_trans_table {
 public:
  /// max_iterations == 0 picks the default cap 2^(|S| * max tau
  /// branching). Throws divergence_error on divergent systems and
  /// pbisim::error when the cap is exceeded.
  explicit weak_trans_table(const plts& sys, unsigned long max_iterations = 0);

  const plts& system() const { return sys_; }

  /// { T : pdist(s) =>tau T } (reflexive-transitive closure of the
  /// lifted tau-hat step).
  const polytope& tau_closure(state_id s) const { return per_state_[s]; }

  /// Lifted to arbitrary sources: { T : D =>tau T }.
  polytope tau_closure(const dist& d) const;

  /// { T : D =>a T }. For a in Act this is =>tau -a-> =>tau and may be
  /// empty; for a == tau it is the tau closure itself (never empty).
  std::optional<polytope> weak_successors(const dist& d, action_id a) const;

  /// Exists T' with D =>tau T' and T' refusing A (no state in the
  /// support of T' enables anything in A ∪ {tau}).
  bool refusal_reachable(const dist& d, const std::vector<action_id>& A) const;

 private:
  const plts& sys_;
  std::vector<polytope> per_state_;
};

/// One-shot conveniences; build a weak_trans_table for repeated use.
polytope weak_tau_polytope(const plts& sys, state_id s);
std::optional<polytope> weak_successors(const plts& sys, const dist& d,
                                        action_id a);
bool refusal_reachable(const plts& sys, const dist& d,
                       const std::vector<action_id>& A);

/// All distributions sum(d(v) * choice(v)) where choice(v) ranges over
/// options(v); used for lifted one-step successors and the weak
/// fixpoint. options(v) must be nonempty for every support state.
std::vector<dist> per_state_combinations(
    const dist& d, const std::vector<std::vector<dist>>& options_by_state);

}  // namespace pbisim

#endif
