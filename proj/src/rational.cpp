#include "crl/rational.hpp"

#include "crl/errors.hpp"

namespace crl {

Rational make_rational(long numerator, long denominator) {
  if (denominator == 0) {
    throw SpecError("rational with zero denominator");
  }
  Rational value(numerator, denominator);
  value.canonicalize();
  return value;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  Rational value;
  if (value.set_str(s, 10) != 0) {
    throw SpecError("cannot parse rational '" + s + "'");
  }
  if (value.get_den() == 0) {
    throw SpecError("rational with zero denominator: '" + s + "'");
  }
  value.canonicalize();
  return value;
}

std::string to_string(const Rational& value) { return value.get_str(); }

Rational sum(const std::vector<Rational>& values) {
  Rational total = 0;
  for (const auto& v : values) {
    total += v;
  }
  return total;
}

}  // namespace crl
