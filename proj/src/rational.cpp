#include "iet/rational.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace iet {

namespace {

bool is_integer_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view s) {
  if (!is_integer_text(s)) {
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  }
  if (s[0] == '+') s.remove_prefix(1);
  return Integer(std::string(s), 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const auto slash = text.find('/');
  Integer num = parse_integer(text.substr(0, slash));
  Integer den = 1;
  if (slash != std::string_view::npos) {
    den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  }
  Rational out(num, den);
  out.canonicalize();
  return out;
}

std::string format_rational(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string format_integer(const Integer& value) { return value.get_str(); }

double log_of(const Integer& value) {
  if (value <= 0) throw std::domain_error("log of a non-positive integer");
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, value.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exponent) * std::numbers::ln2;
}

double log_of(const Rational& value) {
  if (value <= 0) throw std::domain_error("log of a non-positive rational");
  return log_of(Integer(value.get_num())) - log_of(Integer(value.get_den()));
}

}  // namespace iet
