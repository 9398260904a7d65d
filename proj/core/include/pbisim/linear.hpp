#ifndef PBISIM_LINEAR_HPP
#define PBISIM_LINEAR_HPP

#include <optional>
#include <utility>
#include <vector>

#include "pbisim/rational.hpp"

namespace pbisim {

/// Exact feasibility of { x >= 0 : A x = b } over the rationals,
/// decided by phase-1 simplex with Bland's rule. Deterministic: the
/// returned basic solution depends only on variable and equation
/// insertion order.
class linear_system {
 public:
  int add_var();
  int add_vars(int count);
  int n_vars() const { return n_vars_; }

  /// Adds the equation sum(coeff_i * x_i) = rhs. Repeated mentions of
  /// a variable accumulate.
  void add_eq(const std::vector<std::pair<int, rat>>& coeffs, const rat& rhs);

  /// Pins a variable to an exact value (x_i = v).
  void fix_var(int var, const rat& value);

  std::optional<std::vector<rat>> solve() const;
  bool feasible() const { return solve().has_value(); }

 private:
  int n_vars_ = 0;
  std::vector<std::vector<std::pair<int, rat>>> rows_;
  std::vector<rat> rhs_;
};

}  // namespace pbisim

#endif
