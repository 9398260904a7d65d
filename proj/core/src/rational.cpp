#include "pbisim/rational.hpp"

#include <cctype>

namespace pbisim {

bool parse_rat(const std::string& text, rat& out) {
  if (text.empty()) return false;
  std::size_t slash = text.find('/');
  std::string num = text.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  auto digits = [](const std::string& s, bool sign_ok) {
    if (s.empty()) return false;
    std::size_t i = (sign_ok && s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  if (!digits(num, true) || !digits(den, false)) return false;
  mpz_class n(num), d(den);
  if (d == 0) return false;
  out = rat(n, d);
  out.canonicalize();
  return true;
}

}  // namespace pbisim
