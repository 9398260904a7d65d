#ifndef PBISIM_FORMULA_HPP
#define PBISIM_FORMULA_HPP

#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pbisim/rational.hpp"

namespace pbisim {

/// Formula constructors. Conjunction over the empty list is true,
/// disjunction over the empty list is false.
enum class fkind {
  conj,
  disj,
  neg,
  diamond,
  box,
  oplus,    // unweighted convex split
  oplus_w,  // weighted convex split, weights sum to 1
  down,     // support operator
  refusal,  // ref{A}, A a set of external action names
  var,
  mu,
  nu,
};

class formula_node;

/// Immutable, shareable formula tree. Substitution and the
/// characteristic constructions share subterms, so the in-memory shape
/// is a DAG; printing may duplicate.
using formula = std::shared_ptr<const formula_node>;

class formula_node {
 public:
  fkind kind;
  std::string label;                 // action (diamond/box) or variable name
  std::vector<formula> children;     // mu/nu body is children[0]
  std::vector<rat> weights;          // oplus_w only, aligned with children
  std::vector<std::string> refused;  // refusal only, sorted action names
  std::set<std::string> free_vars;
};

formula f_true();
formula f_false();
formula f_conj(std::vector<formula> children);
formula f_disj(std::vector<formula> children);
formula f_neg(formula f);
formula f_diamond(const std::string& action, formula f);
formula f_box(const std::string& action, formula f);
formula f_oplus(std::vector<formula> children);
formula f_oplus_w(std::vector<std::pair<rat, formula>> parts);
formula f_down(formula f);
formula f_ref(std::vector<std::string> actions);
formula f_var(const std::string& name);
formula f_mu(const std::string& var, formula body);
formula f_nu(const std::string& var, formula body);

bool is_true(const formula& f);
bool is_false(const formula& f);
bool formulas_equal(const formula& a, const formula& b);

bool is_closed(const formula& f);
bool is_fixpoint_free(const formula& f);

/// Substitutes replacement for free occurrences of var. Shares
/// untouched subterms; throws on variable capture.
formula substitute(const formula& f, const std::string& var,
                   const formula& replacement);

std::string print_formula(const formula& f);

/// Concrete syntax: true, false, /\, \/, not, <a>phi, [a]phi,
/// oplus(phi1, ...), oplus(p1*phi1, ...), down phi, ref{a,b},
/// variables, mu X. phi, nu X. phi, and(...), or(...). Enforces the
/// mu/nu polarity condition (bound variables only under an even number
/// of negations) and that oplus weights sum to 1.
formula parse_formula(const std::string& text);

/// Ordered list of equations X_i = phi_i with mutually distinct
/// variables, fixpoint-free bodies and free variables among the X_i.
/// The first variable is the designated root.
struct equation {
  std::string var;
  formula body;
};

struct equation_system {
  std::vector<equation> equations;

  const formula* find(const std::string& var) const;
  std::vector<std::string> variables() const;
  /// Throws pbisim::error when the system violates its invariants.
  void validate() const;
};

/// One "X = phi" per line; '#' starts a comment.
equation_system parse_equation_system(const std::string& text);
std::string print_equation_system(const equation_system& es);

}  // namespace pbisim

#endif
