#pragma once

// Deliberately naive reference implementations. Nothing here calls into the
// library beyond the integer type, so agreement is evidence of correctness
// rather than of shared code.

#include <gmpxx.h>

#include <cfloat>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "fqval/interval.hpp"

namespace oracle {

inline unsigned long vp(mpz_class n, const mpz_class& p) {
  unsigned long e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  return e;
}

inline mpz_class power(const mpz_class& b, unsigned long e) {
  mpz_class r = 1;
  for (unsigned long i = 0; i < e; ++i) r *= b;
  return r;
}

/// v_p(x^(p-1) - 1) by forming x^(p-1) in full.
inline unsigned long fermat_quotient_valuation(unsigned long x, unsigned long p) {
  mpz_class v = power(x, p - 1) - 1;
  return vp(v, p);
}

inline unsigned long mul_order(unsigned long x, unsigned long p) {
  unsigned long y = x % p, k = 1;
  while (y != 1) {
    y = static_cast<unsigned long>((static_cast<unsigned __int128>(y) * x) % p);
    ++k;
  }
  return k;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline unsigned long smallest_primitive_root(unsigned long p) {
  for (unsigned long g = 1; g < p; ++g)
    if (mul_order(g, p) == p - 1) return g;
  return 0;
}

/// m with rho^m == a mod p by walking the powers of rho.
inline unsigned long discrete_log(unsigned long a, unsigned long p) {
  const unsigned long rho = smallest_primitive_root(p);
  unsigned long y = 1;
  for (unsigned long m = 0; m < p - 1; ++m) {
    if (y == a % p) return m;
    y = y * rho % p;
  }
  return ~0ul;
}

inline mpz_class sigma(std::uint64_t n) {
  mpz_class s = 0;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    s += static_cast<unsigned long>(d);
    if (d != n / d) s += static_cast<unsigned long>(n / d);
  }
  return s;
}

inline long long mod(long long a, long long m) { return ((a % m) + m) % m; }

/// Distinct alpha1^r alpha2^s as exact big integers.
inline std::size_t count_alpha_products(unsigned long a1, unsigned long a2, long R1, long S1, long long m1,
                                        long long m2, long long g, long long c1) {
  std::set<std::string> seen;
  for (long r = 0; r < R1; ++r)
    for (long s = 0; s < S1; ++s)
      if (mod(m1 * r + m2 * s - c1, g) == 0) seen.insert(mpz_class(power(a1, r) * power(a2, s)).get_str());
  return seen.size();
}

inline std::size_t count_linear_forms(const mpz_class& b1, const mpz_class& b2, long R2, long S2, long long m1,
                                      long long m2, long long g, long long c2) {
  std::set<std::string> seen;
  for (long r = 0; r < R2; ++r)
    for (long s = 0; s < S2; ++s)
      if (mod(m1 * r + m2 * s - c2, g) == 0) seen.insert(mpz_class(b2 * r + b1 * s).get_str());
  return seen.size();
}

}  // namespace oracle

/// The enclosure meets a few ulps around a double approximation v.
inline bool near(const fqval::Interval& i, double v) {
  const double tol = 8 * DBL_EPSILON * std::fabs(v);
  return i.lower() - tol <= v && v <= i.upper() + tol;
}
