#include "nonsig/rational.hpp"

#include <cctype>

#include "nonsig/error.hpp"

namespace nonsig {

std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  auto is_integer = [](std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  auto strip_plus = [](std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    return std::string(s);
  };

  const auto slash = text.find('/');
  const auto num = text.substr(0, slash);
  if (!is_integer(num)) throw InputError("not a rational number: '" + std::string(text) + "'");
  if (slash == std::string_view::npos) return Rational(mpz_class(strip_plus(num)));

  const auto den = text.substr(slash + 1);
  if (!is_integer(den)) throw InputError("not a rational number: '" + std::string(text) + "'");
  mpz_class d(strip_plus(den));
  if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
  Rational q(mpz_class(strip_plus(num)), d);
  q.canonicalize();
  return q;
}

}  // namespace nonsig
