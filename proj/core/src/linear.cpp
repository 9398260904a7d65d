#include "pbisim/linear.hpp"

#include <stdexcept>

namespace pbisim {

int linear_system::add_var() { return n_vars_++; }

int linear_system::add_vars(int count) {
  int first = n_vars_;
  n_vars_ += count;
  return first;
}

void linear_system::add_eq(const std::vector<std::pair<int, rat>>& coeffs,
                           const rat& rhs) {
  for (auto& [v, c] : coeffs)
    if (v < 0 || v >= n_vars_)
      throw std::out_of_range("linear_system: unknown variable");
  rows_.push_back(coeffs);
  rhs_.push_back(rhs);
}

void linear_system::fix_var(int var, const rat& value) {
  add_eq({{var, rat_one()}}, value);
}

std::optional<std::vector<rat>> linear_system::solve() const {
  int m = static_cast<int>(rows_.size());
  int n = n_vars_;
  // Tableau: n structural columns, m artificial columns, rhs column.
  int cols = n + m;
  std::vector<std::vector<rat>> t(m, std::vector<rat>(cols, rat_zero()));
  std::vector<rat> b(m, rat_zero());
  for (int i = 0; i < m; ++i) {
    for (auto& [v, c] : rows_[i]) t[i][v] += c;
    b[i] = rhs_[i];
    if (is_negative(b[i])) {
      for (int j = 0; j < n; ++j) t[i][j] = rat(-t[i][j]);
      b[i] = rat(-b[i]);
    }
    t[i][n + i] = rat_one();
  }
  std::vector<int> basis(m);
  std::vector<bool> dead(cols, false);  // artificials never re-enter
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  // Phase-1 objective: minimize the sum of the artificials. d[j] is the
  // reduced cost of column j, z0 the current objective value.
  std::vector<rat> d(cols, rat_zero());
  rat z0 = rat_zero();
  for (int i = 0; i < m; ++i) {
    z0 += b[i];
    for (int j = 0; j < n; ++j) d[j] -= t[i][j];
  }

  while (true) {
    int enter = -1;
    for (int j = 0; j < cols; ++j) {
      if (dead[j]) continue;
      if (is_negative(d[j])) {
        enter = j;  // Bland: lowest index
        break;
      }
    }
    if (enter < 0) break;
    int leave = -1;
    rat best;
    for (int i = 0; i < m; ++i) {
      if (!is_positive(t[i][enter])) continue;
      rat ratio(b[i] / t[i][enter]);
      if (leave < 0 || ratio < best ||
          (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave < 0)
      // Unbounded phase-1 objective cannot happen (bounded below by 0);
      // defensive guard against a malformed tableau.
      throw std::logic_error("linear_system: phase-1 ratio test failed");
    // Pivot on (leave, enter).
    rat piv = t[leave][enter];
    for (int j = 0; j < cols; ++j) t[leave][j] /= piv;
    b[leave] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave || is_zero(t[i][enter])) continue;
      rat f = t[i][enter];
      for (int j = 0; j < cols; ++j) t[i][j] -= rat(f * t[leave][j]);
      b[i] -= rat(f * b[leave]);
    }
    rat fd = d[enter];
    if (!is_zero(fd)) {
      for (int j = 0; j < cols; ++j) d[j] -= rat(fd * t[leave][j]);
      z0 -= rat(fd * b[leave]);
    }
    if (basis[leave] >= n) dead[basis[leave]] = true;
    basis[leave] = enter;
  }

  if (!is_zero(z0)) return std::nullopt;
  std::vector<rat> x(n, rat_zero());
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) x[basis[i]] = b[i];
  return x;
}

}  // namespace pbisim
