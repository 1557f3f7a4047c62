#pragma once

#include <cstdint>

#include "fqval/natural.hpp"

namespace fqval {

/// Result of an exact p-adic valuation. `witness` is the target reduced
/// mod prime^(exponent+1); it agrees with the expected residue mod
/// prime^exponent and differs from it mod prime^(exponent+1).
struct PadicValuation {
  Natural prime;
  unsigned long exponent = 0;
  Natural witness;
};

struct MultiplicativeOrder {
  Natural base;
  Natural modulus_prime;
  Natural order;
};

struct TeichmullerLift {
  Natural prime;
  unsigned long precision = 1;
  Natural value;
};

/// Largest e with p^e | n. Rejects n = 0 and composite p.
PadicValuation vp(const Natural& n, const Natural& p);

/// Largest e with x^(p-1) == 1 (mod p^e). Never forms x^(p-1) in full:
/// works at modulus p^2, p^4, ... until the congruence fails, then
/// binary-searches the exact exponent.
PadicValuation fermat_quotient_valuation(const Natural& x, const Natural& p);

/// Order of x in (Z/pZ)^*.
MultiplicativeOrder mul_order(const Natural& x, const Natural& p);

/// The (p-1)-th root of unity mod p^e congruent to a mod p.
TeichmullerLift teichmuller_lift(const Natural& a, const Natural& p, unsigned long precision);

/// Smallest primitive root mod p. Its Teichmuller lift is the canonical
/// zeta used for certificate exponents.
Natural smallest_primitive_root(const Natural& p);

/// m in [0, p-1) with a == rho^m (mod p), rho the smallest primitive root.
/// Pohlig-Hellman over the factors of p-1 with baby-step/giant-step in
/// each prime-order subgroup. Requires p < 2^63.
Natural discrete_log(const Natural& a, const Natural& p);

/// sigma(q^c) = (q^(c+1) - 1) / (q - 1).
Natural sigma_prime_power(const Natural& q, unsigned long c);

}  // namespace fqval
