#include "pbisim/polytope.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "pbisim/linear.hpp"

namespace pbisim {

namespace {

// d in hull(gens)? Variables: one convex coefficient per generator.
bool in_hull(const dist& d, const std::vector<dist>& gens) {
  if (gens.empty()) return false;
  std::set<state_id> space;
  for (auto& [s, w] : d.entries()) space.insert(s);
  for (auto& g : gens)
    for (auto& [s, w] : g.entries()) space.insert(s);

  linear_system sys;
  int base = sys.add_vars(static_cast<int>(gens.size()));
  std::vector<std::pair<int, rat>> sum_row;
  for (std::size_t i = 0; i < gens.size(); ++i)
    sum_row.emplace_back(base + static_cast<int>(i), rat_one());
  sys.add_eq(sum_row, rat_one());
  for (state_id s : space) {
    std::vector<std::pair<int, rat>> row;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      rat w = gens[i](s);
      if (!is_zero(w)) row.emplace_back(base + static_cast<int>(i), w);
    }
    sys.add_eq(row, d(s));
  }
  return sys.feasible();
}

}  // namespace

polytope::polytope(std::vector<dist> generators) {
  if (generators.empty()) throw error("polytope needs at least one generator");
  std::sort(generators.begin(), generators.end());
  generators.erase(std::unique(generators.begin(), generators.end()),
                   generators.end());
  gens_ = std::move(generators);
}

polytope polytope::pruned(std::vector<dist> generators) {
  polytope p(std::move(generators));
  p.prune();
  return p;
}

bool polytope::contains(const dist& d) const { return in_hull(d, gens_); }

void polytope::prune() {
  // Sweep from the back of the canonical order so the surviving set is
  // deterministic.
  for (std::size_t i = gens_.size(); i-- > 0;) {
    if (gens_.size() == 1) break;
    std::vector<dist> others;
    others.reserve(gens_.size() - 1);
    for (std::size_t j = 0; j < gens_.size(); ++j)
      if (j != i) others.push_back(gens_[j]);
    if (in_hull(gens_[i], others)) gens_.erase(gens_.begin() + i);
  }
}

}  // namespace pbisim
