#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace arraylab {

using Rational = mpq_class;
using Integer = mpz_class;

inline double to_double(const Rational& q) { return q.get_d(); }

inline Rational pow2(long e) {
  Rational r(1);
  if (e >= 0)
    mpz_mul_2exp(r.get_num_mpz_t(), r.get_num_mpz_t(), static_cast<mp_bitcnt_t>(e));
  else
    mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  return r;
}

Integer binomial_exact(unsigned long n, unsigned long k);
Integer from_u128(unsigned __int128 v);

// Accepts "3/7", "-2", "0.125", "1e-3".
Rational parse_rational(std::string_view text);
// Exact value of the shortest decimal that round-trips to x.
Rational rational_from_double(double x);
std::string to_string(const Rational& q);

}  // namespace arraylab
