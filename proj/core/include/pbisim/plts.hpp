#ifndef PBISIM_PLTS_HPP
#define PBISIM_PLTS_HPP

#include <compare>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pbisim/rational.hpp"

namespace pbisim {

struct error : std::runtime_error {
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Syntax error in a pLTS file, CLI distribution, formula or equation
/// system. Positions are 1-based; col 0 means "whole line".
struct parse_error : error {
  parse_error(const std::string& what, int line_, int col_)
      : error(what + " (line " + std::to_string(line_) + ", col " +
              std::to_string(col_) + ")"),
        line(line_),
        col(col_) {}
  int line;
  int col;
};

struct divergence_error : error {
  divergence_error(const std::string& what, std::vector<std::string> cycle_)
      : error(what), cycle(std::move(cycle_)) {}
  std::vector<std::string> cycle;
};

/// States and actions are interned per pLTS; identifiers are indices
/// into the owning system's name tables. Action 0 is always the
/// internal action "tau".
using state_id = int;
using action_id = int;
inline constexpr action_id tau_action = 0;

/// Finite-support probability distribution over states with exact
/// rational weights. Entries are sorted by state, strictly positive,
/// and sum to exactly 1; equality is structural.
class dist {
 public:
  using entry = std::pair<state_id, rat>;

  dist() = default;

  static dist point(state_id s);
  /// Merges duplicate states, drops zero entries, verifies the exact
  /// sum. Throws pbisim::error on negative weights or sum != 1.
  static dist make(std::vector<entry> entries);

  const std::vector<entry>& entries() const { return entries_; }
  bool valid() const { return !entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }

  /// Weight of s; exact 0 when s is outside the support.
  rat operator()(state_id s) const;
  bool in_support(state_id s) const;
  std::vector<state_id> support() const;
  bool is_point() const { return entries_.size() == 1; }

  bool operator==(const dist& o) const { return compare(o) == 0; }
  bool operator!=(const dist& o) const { return compare(o) != 0; }
  bool operator<(const dist& o) const { return compare(o) < 0; }

  int compare(const dist& o) const;

 private:
  std::vector<entry> entries_;
};

/// p1*D1 + ... + pn*Dn with nonnegative rational weights summing to 1.
dist convex_combine(const std::vector<std::pair<rat, dist>>& parts);

struct transition {
  state_id src;
  action_id act;
  dist target;
};

/// Finite probabilistic labelled transition system. Immutable after
/// construction; safe to share across threads. A divergence witness
/// (a cycle in the tau-support graph) is computed eagerly at build
/// time; weak-semantics operations refuse to run when one exists.
class plts {
 public:
  friend class plts_builder;

  int n_states() const { return static_cast<int>(states_.size()); }
  int n_actions() const { return static_cast<int>(actions_.size()); }

  const std::string& state_name(state_id s) const { return states_[s]; }
  const std::string& action_name(action_id a) const { return actions_[a]; }
  std::optional<state_id> find_state(const std::string& name) const;
  std::optional<action_id> find_action(const std::string& name) const;

  /// External actions (everything except tau), ascending ids.
  std::vector<action_id> alphabet() const;

  const std::vector<transition>& transitions() const { return trans_; }
  /// Target distributions of the transitions (s, a, _) in declaration
  /// order; empty when s has no a-transition.
  const std::vector<dist>& targets(state_id s, action_id a) const;

  bool enables(state_id s, action_id a) const;
  std::vector<action_id> enabled_actions(state_id s) const;
  bool is_tau_free() const;

  /// Maximal refused external action set {a in Act | s -/a->}.
  std::vector<action_id> refused_actions(state_id s) const;

  const std::optional<std::vector<state_id>>& divergence() const {
    return divergence_;
  }
  bool divergence_free() const { return !divergence_.has_value(); }
  void require_divergence_free() const;

 private:
  plts() = default;

  std::vector<std::string> states_;
  std::map<std::string, state_id> state_ix_;
  std::vector<std::string> actions_;  // actions_[0] == "tau"
  std::map<std::string, action_id> action_ix_;
  std::vector<transition> trans_;
  std::vector<std::vector<std::vector<dist>>> targets_;  // [state][action]
  std::optional<std::vector<state_id>> divergence_;
};

class plts_builder {
 public:
  /// Token must be nonempty, without whitespace, '#' or ','; duplicate
  /// declarations are an error.
  state_id add_state(const std::string& name);
  action_id intern_action(const std::string& name);
  std::optional<state_id> find_state(const std::string& name) const;

  void add_transition(state_id src, action_id act, dist target);

  /// Validates the system and computes the divergence witness.
  plts build();

 private:
  plts sys_;
  bool built_ = false;
};

/// Every state in the support of any target distribution enables no
/// action in A ∪ {tau}. A must not contain tau.
bool refuses(const plts& sys, const dist& d, const std::vector<action_id>& A);

/// Cycle s0 ... sk = s0 in the graph with an edge s -> s' iff some
/// s -tau-> D has s' in the support of D, or absent if divergence-free.
std::optional<std::vector<state_id>> detect_divergence_cycle(
    const std::vector<std::string>& states,
    const std::vector<transition>& trans);

plts parse_plts(const std::string& text);
std::string serialize_plts(const plts& sys);

/// "p1 s1 + p2 s2 + ..." with a bare state name meaning the point
/// distribution.
dist parse_dist_text(const plts& sys, const std::string& text);
std::string dist_str(const plts& sys, const dist& d);

}  // namespace pbisim

#endif
