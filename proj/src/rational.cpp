#include "arraylab/rational.hpp"

#include "arraylab/errors.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace arraylab {

Integer binomial_exact(unsigned long n, unsigned long k) {
  Integer r;
  if (k > n) return 0;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

Integer from_u128(unsigned __int128 v) {
  Integer hi(static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64)));
  Integer lo(static_cast<unsigned long>(static_cast<std::uint64_t>(v)));
  return (hi << 64) + lo;
}

namespace {

Rational parse_decimal(std::string_view text) {
  std::string s(text);
  int exp10 = 0;
  auto e = s.find_first_of("eE");
  if (e != std::string::npos) {
    exp10 = std::stoi(s.substr(e + 1));
    s.resize(e);
  }
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.erase(0, 1);
  }
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    exp10 -= static_cast<int>(s.size() - dot - 1);
    s.erase(dot, 1);
  }
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw DomainError("not a number: " + std::string(text));
  Integer digits(s, 10);
  Integer ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::abs(exp10)));
  Rational r = exp10 >= 0 ? Rational(digits * ten_pow) : Rational(digits, ten_pow);
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  Rational num = parse_decimal(text.substr(0, slash));
  Rational den = parse_decimal(text.substr(slash + 1));
  if (den == 0) throw DomainError("zero denominator: " + std::string(text));
  return num / den;
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw DomainError("non-finite value");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return parse_decimal(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
}

std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace arraylab
