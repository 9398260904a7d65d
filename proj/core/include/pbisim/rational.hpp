#ifndef PBISIM_RATIONAL_HPP
#define PBISIM_RATIONAL_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace pbisim {

/// Exact arbitrary-precision rational. All probabilities, weights and
/// solver coefficients in this library are of this type; there is no
/// floating point anywhere in the decision procedures.
using rat = mpq_class;

inline rat rat_zero() { return rat(0); }
inline rat rat_one() { return rat(1); }

/// Builds a canonical rational from numerator/denominator.
inline rat make_rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  rat r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_zero(const rat& r) { return sgn(r) == 0; }
inline bool is_positive(const rat& r) { return sgn(r) > 0; }
inline bool is_negative(const rat& r) { return sgn(r) < 0; }

/// "n/d", or just "n" when the denominator is 1.
inline std::string rat_str(const rat& r) { return r.get_str(); }

/// Parses "n", "-n" or "n/d". Returns false on malformed input.
bool parse_rat(const std::string& text, rat& out);

}  // namespace pbisim

#endif
