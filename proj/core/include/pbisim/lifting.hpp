#ifndef PBISIM_LIFTING_HPP
#define PBISIM_LIFTING_HPP

#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "pbisim/plts.hpp"
#include "pbisim/polytope.hpp"

namespace pbisim {

/// Relation between two state spaces (indices 0..left_size-1 and
/// 0..right_size-1, possibly the same space).
class state_relation {
 public:
  state_relation(int left_size, int right_size)
      : left_(left_size), right_(right_size) {}

  void add(state_id s, state_id t);
  bool related(state_id s, state_id t) const { return pairs_.count({s, t}); }
  const std::set<std::pair<state_id, state_id>>& pairs() const {
    return pairs_;
  }
  int left_size() const { return left_; }
  int right_size() const { return right_; }

  static state_relation identity(int n);
  static state_relation total(int left, int right);
  state_relation inverse() const;

  /// The laws below require a single space (left_size == right_size).
  bool is_reflexive() const;
  bool is_symmetric() const;
  bool is_transitive() const;
  bool is_equivalence() const;
  bool is_preorder() const;

 private:
  int left_;
  int right_;
  std::set<std::pair<state_id, state_id>> pairs_;
};

/// Bipartite mass-transport witness for a lifted relation: row sums
/// equal D(s), column sums equal T(t), and every positive entry's pair
/// is in the relation.
struct weight_function {
  std::vector<std::tuple<state_id, state_id, rat>> entries;

  rat row_sum(state_id s) const;
  rat col_sum(state_id t) const;
};

/// Checks the three weight-function conditions exactly.
bool verify_weight_function(const state_relation& r, const dist& d,
                            const dist& t, const weight_function& w);

/// Decides D lift(R) T, returning a witness when the lifting holds.
/// Implemented as an exact max-flow on the bipartite support graph;
/// ties in flow routing are broken by state order, so the witness is
/// deterministic.
std::optional<weight_function> lift_check(const state_relation& r,
                                          const dist& d, const dist& t);

/// For an equivalence relation, D lift(R) T iff every equivalence
/// class receives equal mass. Throws pbisim::error when r is not an
/// equivalence over a single space.
bool lift_check_equivalence(const state_relation& r, const dist& d,
                            const dist& t);

/// Relation from states to convex sets of distributions, each set in
/// generator representation. An absent or empty generator list is the
/// empty set.
struct state_dist_relation {
  std::map<state_id, std::vector<dist>> per_state;
};

/// D lift(R) T for a state-to-distribution-set relation: T is a
/// D-weighted combination of per-state members. Decided as one exact
/// linear feasibility problem over the generators. Requires per_state
/// to be defined for every support state of D.
bool lift_check_sd(const state_dist_relation& r, const dist& d, const dist& t);

/// Splits a valid witness into a paired decomposition: index set with
/// sum(p_i * point(s_i)) = D, sum(p_i * point(t_i)) = T. Throws when
/// the witness does not satisfy the row/column conditions.
std::vector<std::tuple<rat, state_id, state_id>> decompose(
    const dist& d, const dist& t, const weight_function& w);

}  // namespace pbisim

#endif
