#ifndef PBISIM_POLYTOPE_HPP
#define PBISIM_POLYTOPE_HPP

#include <vector>

#include "pbisim/plts.hpp"

namespace pbisim {

/// Convex set of distributions represented by a finite nonempty
/// generator list. Generators are kept deduplicated in canonical
/// order; pruned() additionally removes generators that are convex
/// combinations of the others, which never changes membership.
class polytope {
 public:
  explicit polytope(std::vector<dist> generators);

  static polytope pruned(std::vector<dist> generators);

  const std::vector<dist>& generators() const { return gens_; }
  std::size_t size() const { return gens_.size(); }

  /// Exact linear feasibility: d = sum(lambda_i * g_i) with lambda a
  /// convex combination.
  bool contains(const dist& d) const;

  /// Removes redundant generators in place (canonical sweep).
  void prune();

  bool operator==(const polytope& o) const { return gens_ == o.gens_; }

 private:
  std::vector<dist> gens_;
};

}  // namespace pbisim

#endif
