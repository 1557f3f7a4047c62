#include "fqval/arith.hpp"

#include <cmath>
#include <unordered_map>

#include "fqval/errors.hpp"

namespace fqval {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 base, u64 e, u64 m) {
  u64 r = 1 % m;
  base %= m;
  while (e) {
    if (e & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    e >>= 1;
  }
  return r;
}

// Solves gen^x == target in a cyclic group of prime order `order`.
u64 bsgs(u64 gen, u64 target, u64 order, u64 p) {
  if (order == 1) return 0;
  auto m = static_cast<u64>(std::ceil(std::sqrt(static_cast<long double>(order))));
  if (m > (u64{1} << 26)) throw CapExceeded("discrete_log: subgroup of prime order " + std::to_string(order) + " too large for baby-step/giant-step");
  std::unordered_map<u64, u64> baby;
  baby.reserve(m * 2);
  u64 cur = 1;
  for (u64 j = 0; j < m; ++j) {
    baby.emplace(cur, j);
    cur = mulmod(cur, gen, p);
  }
  // gen^-m
  u64 giant = powmod(gen, order - (m % order), p);
  u64 y = target;
  for (u64 i = 0; i <= m; ++i) {
    if (auto it = baby.find(y); it != baby.end()) return (i * m + it->second) % order;
    y = mulmod(y, giant, p);
  }
  throw DomainError("discrete_log: target not in subgroup");
}

void require_unit(const Natural& x, const Natural& p, const char* op) {
  if (mpz_divisible_p(x.get_mpz_t(), p.get_mpz_t()))
    throw DomainError(std::string(op) + ": argument is divisible by p=" + to_decimal(p));
}

}  // namespace

PadicValuation vp(const Natural& n, const Natural& p) {
  require_prime(p, "vp: p");
  if (n <= 0) throw DomainError("vp: n must be >= 1 (v_p(0) is infinite)");
  Natural rest;
  unsigned long e = mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
  Natural modulus = pow(p, e + 1);
  Natural witness = n % modulus;
  return {p, e, witness};
}

PadicValuation fermat_quotient_valuation(const Natural& x, const Natural& p) {
  require_prime(p, "fermat_quotient_valuation: p");
  if (x <= 0) throw DomainError("fermat_quotient_valuation: x must be positive");
  require_unit(x, p, "fermat_quotient_valuation");
  if (x == 1) throw DomainError("fermat_quotient_valuation: x = 1 gives x^(p-1) - 1 = 0");

  const Natural exponent = p - 1;
  auto holds_at = [&](unsigned long e) { return powm(x, exponent, pow(p, e)) == 1; };

  unsigned long lo = 1;  // x^(p-1) == 1 mod p always
  unsigned long hi = 2;
  while (holds_at(hi)) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    unsigned long mid = lo + (hi - lo) / 2;
    if (holds_at(mid))
      lo = mid;
    else
      hi = mid;
  }
  return {p, lo, powm(x, exponent, pow(p, lo + 1))};
}

MultiplicativeOrder mul_order(const Natural& x, const Natural& p) {
  require_prime(p, "mul_order: p");
  require_unit(x, p, "mul_order");
  Natural order = p - 1;
  const Natural residue = x % p;
  for (const auto& [ell, e] : factorize(p - 1)) {
    for (unsigned i = 0; i < e; ++i) {
      Natural candidate = order / ell;
      if (powm(residue, candidate, p) != 1) break;
      order = candidate;
    }
  }
  return {x, p, order};
}

TeichmullerLift teichmuller_lift(const Natural& a, const Natural& p, unsigned long precision) {
  require_prime(p, "teichmuller_lift: p");
  if (precision < 1) throw DomainError("teichmuller_lift: precision must be >= 1");
  require_unit(a, p, "teichmuller_lift");
  const Natural modulus = pow(p, precision);
  Natural z = a % modulus;
  if (z < 0) z += modulus;
  for (;;) {
    Natural next = powm(z, p, modulus);
    if (next == z) break;
    z = next;
  }
  return {p, precision, z};
}

Natural smallest_primitive_root(const Natural& p) {
  require_prime(p, "smallest_primitive_root: p");
  if (p == 2) return 1;
  const auto factors = factorize(p - 1);
  for (Natural g = 2;; ++g) {
    bool generator = true;
    for (const auto& [ell, e] : factors) {
      if (powm(g, Natural((p - 1) / ell), p) == 1) {
        generator = false;
        break;
      }
    }
    if (generator) return g;
  }
}

Natural discrete_log(const Natural& a, const Natural& p) {
  require_prime(p, "discrete_log: p");
  if (mpz_sizeinbase(p.get_mpz_t(), 2) > 63) throw CapExceeded("discrete_log: p must be below 2^63");
  require_unit(a, p, "discrete_log");
  const u64 pp = to_u64(p, "p");
  if (pp == 2) return 0;
  const u64 n = pp - 1;
  const u64 rho = to_u64(smallest_primitive_root(p), "rho");
  const u64 target = to_u64(Natural(a % p), "a");

  // Pohlig-Hellman: recover m mod ell^e for each prime power, then CRT.
  u64 m = 0, mod = 1;
  for (const auto& [ell_n, e] : factorize(Natural(n))) {
    const u64 ell = to_u64(ell_n, "ell");
    const u64 gamma = powmod(rho, n / ell, pp);
    u64 x = 0, ell_k = 1, ell_e = 1;
    for (unsigned i = 0; i < e; ++i) ell_e *= ell;
    for (unsigned k = 0; k < e; ++k) {
      // h = (target * rho^-x)^(n / ell^(k+1))
      u64 rho_inv_x = powmod(rho, (n - x % n) % n, pp);
      u64 h = powmod(mulmod(target, rho_inv_x, pp), n / (ell_k * ell), pp);
      u64 d = bsgs(gamma, h, ell, pp);
      x += d * ell_k;
      ell_k *= ell;
    }
    // CRT merge of m (mod `mod`) with x (mod ell_e); moduli are coprime.
    Natural M = mod, E = ell_e, inv;
    mpz_invert(inv.get_mpz_t(), M.get_mpz_t(), E.get_mpz_t());
    Natural t = (Natural(x) - Natural(m)) % E;
    if (t < 0) t += E;
    t = (t * inv) % E;
    m = to_u64(Natural(Natural(m) + M * t), "m");
    mod *= ell_e;
  }
  return Natural(m % n);
}

Natural sigma_prime_power(const Natural& q, unsigned long c) {
  require_prime(q, "sigma_prime_power: q");
  Natural num = pow(q, c + 1) - 1;
  Natural den = q - 1;
  Natural r;
  mpz_divexact(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return r;
}

}  // namespace fqval
