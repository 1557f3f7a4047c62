#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fqval/interval.hpp"
#include "fqval/natural.hpp"

namespace fqval {

struct PrimePower {
  Natural prime;
  unsigned long exponent = 1;
};

/// N = prod p_i^{e_i} with strictly increasing primes and e_i >= 1.
class FactoredInteger {
 public:
  FactoredInteger() = default;
  explicit FactoredInteger(std::vector<PrimePower> factors);

  static FactoredInteger factor(const Natural& n);
  /// Parses "2^4 * 31", "2^2*7", "3" and similar products of prime powers.
  static FactoredInteger parse(std::string_view text);

  const std::vector<PrimePower>& factors() const { return factors_; }
  std::size_t size() const { return factors_.size(); }
  Natural value() const;
  /// sigma(N), computed from the factorization.
  Natural sigma() const;
  std::string str() const;

 private:
  std::vector<PrimePower> factors_;
};

/// sigma(N)/N = n/d.
struct Abundancy {
  Natural n, d;
  bool reduced = true;
};

Abundancy abundancy(const FactoredInteger& N);

struct NagellResult {
  unsigned long lhs = 0;  // v_p(sigma(q^c))
  unsigned long rhs = 0;  // v_p(q^{p-1} - 1) + v_p(c + 1)
  bool holds = false;
};

/// v_p(sigma(q^c)) <= v_p(q^{p-1}-1) + v_p(c+1) for an odd prime q != p.
NagellResult nagell_check(const Natural& p, const Natural& q, unsigned long c);

struct NagellRow {
  std::uint64_t p, q, c;
  NagellResult result;
};

/// Every (p, q, c) with p prime in [p_min, p_max], q odd prime in
/// [q_min, q_max], q != p, 1 <= c <= c_max; sorted by (p, q, c).
std::vector<NagellRow> nagell_scan(std::uint64_t p_min, std::uint64_t p_max, std::uint64_t q_min,
                                   std::uint64_t q_max, std::uint64_t c_max, unsigned workers = 1);
/// CSV with header p,q,c,lhs,rhs.
void write_nagell_csv(std::ostream& out, const std::vector<NagellRow>& rows);

/// v_p(c+1) plus the explicit Fermat-quotient bound for base q (odd-prime
/// form for odd q, base-2 form for q = 2).
Natural thm3_bound(const Natural& p, const Natural& q, unsigned long c);

/// v_p(c+1) + 2 + (log q + log log q + log log p)/log p.
Interval conj_thm3_bound(const Natural& p, const Natural& q, unsigned long c);

/// v_p(sigma(N)) as the sum of v_p(sigma(p_i^{e_i})).
unsigned long sigma_valuation(const Natural& p, const FactoredInteger& N);

struct Thm4Result {
  Interval log_rhs;
  double rhs = 0;  // exp(log_rhs) as a double; may be +inf
  bool holds = false;
};

/// N <= d^C prod_{i<k} p_i^{C(k-1)(p_k-1)/log p_k} * p_k^{C(k-1)(p_{k-1}-1)/log p_{k-1}}.
/// Requires sigma(N) d = n N and k >= 2.
Thm4Result thm4_bound_eq08(const FactoredInteger& N, const Abundancy& alpha, const RealValue& C);

/// Smallest C (to 1e-6) for which the first perfect-number bound holds,
/// found by bisection.
double thm4_min_constant(const FactoredInteger& N, const Abundancy& alpha);

struct Thm4ConjResult {
  Interval log_first;   // k^2
  Interval log_second;  // e/(e-2) (log d - k log k) + k C' sum log p_i
  Interval log_rhs;     // max of the two
  bool holds = false;
  Interval E;               // sum (e_i + 1) log p_i
  Interval E_chain_bound;   // max{k^2, e/(e-2)(log d - k log k + k C' sum log p_i)}
};

/// N < max{e^{k^2}, d^{e/(e-2)} k^{-ke/(e-2)} (prod p_i)^{k C'}}.
Thm4ConjResult thm4_bound_eq09(const FactoredInteger& N, const Abundancy& alpha, const RealValue& Cprime);

struct ExponentCheck {
  bool holds = true;
  std::vector<PrimePower> violations;
};

/// For a perfect N, every exponent satisfies e_i <= (p_k - 1)/2.
ExponentCheck primitive_exponent_check(const FactoredInteger& N);

/// Reads the perfect-number table: one "2^a * M" factorization per line,
/// '#' comments allowed.
std::vector<FactoredInteger> load_perfect_table(const std::string& path);
std::string default_perfect_table_path();

}  // namespace fqval
