#include "fqval/natural.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "fqval/errors.hpp"

namespace fqval {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

Natural pollard_brent(const Natural& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    Natural y = 2, x, ys, q = 1, g = 1;
    unsigned long r = 1;
    const unsigned long m = 128;
    auto step = [&](const Natural& v) {
      Natural t = v * v + c;
      mpz_mod(t.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
      return t;
    };
    while (g == 1) {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = step(y);
      unsigned long k = 0;
      while (k < r && g == 1) {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = step(y);
          Natural d = x - y;
          q = q * abs(d);
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        g = gcd(q, n);
        k += m;
      }
      r *= 2;
    }
    if (g == n) {
      do {
        ys = step(ys);
        g = gcd(Natural(abs(x - ys)), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(const Natural& n, std::map<Natural, unsigned>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  Natural d = pollard_brent(n);
  factor_into(d, out);
  factor_into(Natural(n / d), out);
}

}  // namespace

Natural parse_natural(std::string_view text) {
  if (!all_digits(text)) throw DomainError("not a nonnegative decimal integer: '" + std::string(text) + "'");
  return Natural(std::string(text), 10);
}

Integer parse_integer(std::string_view text) {
  if (!text.empty() && text.front() == '-') {
    Integer v = parse_natural(text.substr(1));
    return -v;
  }
  return parse_natural(text);
}

std::string to_decimal(const mpz_class& n) { return n.get_str(10); }

bool is_prime(const Natural& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

void require_prime(const Natural& p, const char* what) {
  if (!is_prime(p)) throw DomainError(std::string(what) + " must be prime, got " + to_decimal(p));
}

bool fits_u64(const mpz_class& n) {
  return n >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 64;
}

std::uint64_t to_u64(const mpz_class& n, const char* what) {
  if (!fits_u64(n)) throw CapExceeded(std::string(what) + " does not fit in 64 bits: " + to_decimal(n));
  std::uint64_t v = 0;
  mpz_export(&v, nullptr, -1, sizeof v, 0, 0, n.get_mpz_t());
  return v;
}

Natural pow(const Natural& base, unsigned long exponent) {
  Natural r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
  return r;
}

Natural powm(const Natural& base, const Integer& exponent, const Natural& modulus) {
  Natural r;
  if (exponent < 0) {
    Natural inv;
    if (mpz_invert(inv.get_mpz_t(), base.get_mpz_t(), modulus.get_mpz_t()) == 0)
      throw DomainError("negative exponent of a non-invertible residue");
    Integer e = -exponent;
    mpz_powm(r.get_mpz_t(), inv.get_mpz_t(), e.get_mpz_t(), modulus.get_mpz_t());
    return r;
  }
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(), modulus.get_mpz_t());
  return r;
}

Natural gcd(const Natural& a, const Natural& b) {
  Natural r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Natural lcm(const Natural& a, const Natural& b) {
  Natural r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Factorization factorize(const Natural& n) {
  if (n < 1) throw DomainError("factorize: n must be positive");
  std::map<Natural, unsigned> found;
  Natural rest = n;
  for (unsigned long d = 2; d < 100000; d += (d == 2 ? 1 : 2)) {
    if (mpz_cmp_ui(rest.get_mpz_t(), d * d) < 0) break;
    if (mpz_divisible_ui_p(rest.get_mpz_t(), d)) {
      unsigned e = 0;
      while (mpz_divisible_ui_p(rest.get_mpz_t(), d)) {
        mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), d);
        ++e;
      }
      found[Natural(d)] = e;
    }
  }
  factor_into(rest, found);
  return {found.begin(), found.end()};
}

std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  if (hi < 2 || lo > hi) return out;
  lo = std::max<std::uint64_t>(lo, 2);
  auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(hi)));
  while (root * root > hi) --root;
  while ((root + 1) * (root + 1) <= hi) ++root;

  std::vector<bool> small(root + 1, true);
  std::vector<std::uint64_t> base;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (std::uint64_t j = i * i; j <= root; j += i) small[j] = false;
  }

  const std::uint64_t segment = 1 << 18;
  for (std::uint64_t start = lo; start <= hi; start += segment) {
    std::uint64_t end = std::min(hi, start + segment - 1);
    std::vector<bool> mark(end - start + 1, true);
    for (auto q : base) {
      if (q * q > end) break;
      std::uint64_t first = std::max(q * q, (start + q - 1) / q * q);
      for (std::uint64_t j = first; j <= end; j += q) mark[j - start] = false;
    }
    for (std::uint64_t i = 0; i < mark.size(); ++i)
      if (mark[i]) out.push_back(start + i);
    if (end == hi) break;
  }
  return out;
}

}  // namespace fqval
