#pragma once

#include <string>
#include <vector>

#include "fqval/interval.hpp"
#include "fqval/natural.hpp"

namespace fqval {

/// Which specialization of the explicit Fermat-quotient bound was used.
enum class BoundFormula {
  General,   // v_p(x^{p-1}-1) via auxiliary y coprime to x
  OddPrime,  // x = q odd prime, y = 2
  Base2,     // x = 2, y = 3
};
const char* to_string(BoundFormula f);

struct BoundResult {
  Natural p, x, y;
  Natural bound;  // floor(283 (p-1) (log y/log p)(log xy/log p)) + 4
  BoundFormula formula = BoundFormula::General;
};

inline constexpr long kBoundConstant = 283;

/// floor(283 (p-1) (log y / log p) (log xy / log p)) + 4, with the floor
/// certified by precision escalation.
BoundResult thm2_bound(const Natural& p, const Natural& x, const Natural& y);
BoundResult thm2_bound_odd_prime(const Natural& q, const Natural& p);
BoundResult thm2_bound_base2(const Natural& p);

/// The specialization used by scans: x = 2 takes the base-2 form, an odd
/// prime x the odd-prime form, and any other x the general form with y the
/// smallest prime not dividing x.
BoundResult thm2_bound_for_base(const Natural& x, const Natural& p);
Natural default_auxiliary_base(const Natural& x);

/// 2 + (log x + 2 log log x + log log p) / log p. Rejects p = 2.
Interval conj1_bound(const Natural& x, const Natural& p, mpfr_prec_t prec = kBasePrecision);
/// 2 + (log q + log log q + log log p) / log p for primes q != p, both >= 3.
Interval conj1_bound_prime(const Natural& q, const Natural& p, mpfr_prec_t prec = kBasePrecision);

/// 1 + (1 + eps p) log x / log p. Exposed for comparison only.
Interval abc_threshold(const Natural& x, const Natural& p, const RealValue& eps, mpfr_prec_t prec = kBasePrecision);

struct HeuristicExponent {
  Natural x, p;
  Interval e;
};

/// e(x, p) = 2 + (log x + 2 log log x + log log p) / log p for x, p >= 3.
HeuristicExponent heuristic_exponent(const Natural& x, const Natural& p, mpfr_prec_t prec = kBasePrecision);

struct HeuristicSum {
  long double sum = 0;    // sum over primes 3 <= p <= P, 3 <= x <= X of p^{1-e(x,p)}
  long double bound = 0;  // (sum 1/(p log p)) * (sum 1/(x log^2 x))
  long double sum_error = 0;
  long double bound_error = 0;
  bool sum_le_bound = false;  // sum - sum_error <= bound + bound_error
};

HeuristicSum heuristic_partial_sum(std::uint64_t P, std::uint64_t X);

struct ConjectureViolation {
  Natural p, x;
  unsigned long valuation = 0;
  Interval bound;
};

/// Pairs 2 <= x <= Xmax, 3 <= p <= Pmax, gcd(x, p) = 1, whose Fermat
/// quotient valuation exceeds conj1_bound(x, p). Sorted by (p, x); the
/// result does not depend on `workers`.
std::vector<ConjectureViolation> conjecture_scan(std::uint64_t Xmax, std::uint64_t Pmax, unsigned workers = 1);

/// One JSON line: {"p": "...", "x": "...", "v": n, "bound": real}.
std::string to_jsonl(const ConjectureViolation& v);

}  // namespace fqval
