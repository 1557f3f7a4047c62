#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "fqval/interval.hpp"
#include "fqval/natural.hpp"

namespace fqval {

/// Inputs of the two-logarithm valuation certificate.
///
/// The certificate asserts v_p(Lambda) <= K*L - 1 for the p-adic linear
/// form Lambda = b2*log(alpha1) - b1*log(alpha2) once three finite
/// conditions hold: enough distinct products alpha1^r alpha2^s in one
/// residue class (r < R1, s < S1), enough distinct values b2*r + b1*s in
/// one class (r < R2, s < S2), and the size inequality
///
///   K(L-1) log p > 3 log N + (K-1) log b + L((R-1) log alpha1 + (S-1) log alpha2)
///
/// where R = R1+R2-1, S = S1+S2-1, N = KL and
/// b = ((R-1) b2 + (S-1) b1)/2 * (prod_{k<K} k!)^(-2/(K^2-K)).
struct CertificateParams {
  Natural p;
  Natural alpha1, alpha2;
  Integer m1, m2;
  Natural g;
  Natural K, L;
  Natural R1, R2, S1, S2;
  Natural b1, b2;
  Integer c1, c2;
};

struct DerivedCertQuantities {
  Integer R, S;
  Natural N;
  Interval log_b;
};

/// Builds params with m1, m2 taken from the canonical zeta (smallest
/// primitive root) and g = lcm of the two residual orders.
CertificateParams make_certificate_params(const Natural& p, const Natural& alpha1, const Natural& alpha2,
                                          const Natural& K, const Natural& L, const Natural& R1,
                                          const Natural& R2, const Natural& S1, const Natural& S2,
                                          const Natural& b1, const Natural& b2, const Integer& c1,
                                          const Integer& c2);

/// Checks the hypotheses that tie the params together: p prime, p does not
/// divide alpha_i, alpha_i^g == 1 (mod p), alpha_i == rho^{m_i} (mod p),
/// gcd(b1, b2, p) = 1, K >= 3, L >= 2. Throws DomainError on violation.
void validate_certificate(const CertificateParams& params);

inline constexpr std::uint64_t kCountCap = 10'000'000;

/// Distinct exact values alpha1^r alpha2^s, 0 <= r < R1, 0 <= s < S1,
/// restricted to m1 r + m2 s == c1 (mod g).
std::uint64_t count_alpha_products(const CertificateParams& params);

/// Distinct values b2 r + b1 s, 0 <= r < R2, 0 <= s < S2, restricted to
/// m1 r + m2 s == c2 (mod g).
std::uint64_t count_linear_forms(const CertificateParams& params);

/// log prod_{k=1}^{K-1} k!. Exact summation up to kSuperfactorialCrossover,
/// Barnes-G asymptotic expansion with an explicit remainder above it.
Interval log_superfactorial(const Natural& K, mpfr_prec_t prec = kBasePrecision);
inline constexpr unsigned long kSuperfactorialCrossover = 1'000'000;
/// The Barnes-G expansion alone, enclosing the truncation remainder.
Interval log_superfactorial_asymptotic(const Natural& K, mpfr_prec_t prec = kBasePrecision);

/// log b for explicit (R, S, b1, b2, K). Throws DegenerateB when the
/// numerator (R-1) b2 + (S-1) b1 is not positive.
Interval log_b(const Integer& R, const Integer& S, const Natural& b1, const Natural& b2, const Natural& K,
               mpfr_prec_t prec = kBasePrecision);

DerivedCertQuantities derive_quantities(const CertificateParams& params, mpfr_prec_t prec = kBasePrecision);
Interval compute_log_b(const CertificateParams& params, mpfr_prec_t prec = kBasePrecision);

/// The size inequality on raw quantities, escalating precision while the
/// enclosure straddles equality.
Truth main_inequality(const Natural& p, const Natural& K, const Natural& L, const Integer& R, const Integer& S,
                      const Natural& b1, const Natural& b2, const Natural& alpha1, const Natural& alpha2);

Truth check_main_inequality(const CertificateParams& params);

enum class Condition { AlphaProducts, LinearForms, MainInequality };
const char* to_string(Condition c);

struct ConditionOutcome {
  Condition condition;
  Truth outcome;
  std::string detail;
};

struct CertificateVerdict {
  bool certified = false;
  Natural bound;  // K*L - 1, meaningful when certified
  std::uint64_t alpha_products = 0;
  std::uint64_t linear_forms = 0;
  std::vector<ConditionOutcome> outcomes;  // all three, in order
  std::vector<Condition> failing;
  std::string target;  // what the bound is a bound for
};

CertificateVerdict verify_certificate(const CertificateParams& params);

// ---------------------------------------------------------------------------
// Weighted-sum lemma.

struct LemmaInstance {
  long K = 1, L = 1, R = 1, S = 1, g = 1;
  long m1 = 0, m2 = 0, c = 0;
  std::vector<std::pair<long, long>> pairs;  // exactly K*L pairs (r_j, s_j)
};

struct LemmaBounds {
  mpq_class M1, G1, M2, G2;
  mpz_class sum_lr, sum_ls;
  bool within = false;
};

/// With l_j = floor((j-1)/K), checks
/// M_i - G_i <= sum_j l_j r_j (resp. s_j) <= M_i + G_i where
/// M1 = (L-1)(sum r)/2, G1 = N L (R-1)/4, M2 = (L-1)(sum s)/2, G2 = N L (S-1)/4.
LemmaBounds lemma10_bounds(const LemmaInstance& inst);

// ---------------------------------------------------------------------------
// Parameter selection for the Fermat-quotient application.

struct ParamSelection {
  RealValue k, l, B;
  Natural g;
  RealValue a1, a2;
  Natural L, K, R1, S1, R2, S2;
  Natural R, S, N;
  Interval log_b;
};

/// L = floor(lB)+2, K = floor(k g L a1 a2)+1,
/// R1 = floor(sqrt(g L a2/a1))+1, S1 = floor(sqrt(g L a1/a2))+1,
/// R2 = floor(sqrt(g (K-1) L a2/a1))+1, S2 = floor(sqrt(g (K-1) L a1/a2))+1,
/// b = g (R+S-2)/2 * (prod_{k<K} k!)^(-2/(K^2-K)).
ParamSelection select_parameters(const RealValue& k, const RealValue& l, const RealValue& B, const Natural& g,
                                 const RealValue& a1, const RealValue& a2);

inline constexpr std::size_t kMaxSelectionBits = 1 << 16;

/// k floor(lB+1) floor(lB+2) - k floor(lB+2) B >= T1 + T2 + T3, with
/// T1 = 2 floor(lB+2)^2 sqrt(k), T2 = 2 floor(lB+2)^{3/2} (g a1 a2)^{-1/2},
/// T3 = 3 log(g a1 a2 k floor(lB+2)^2 + floor(lB+2)) / (g a1 a2 log p).
Truth check_kl_condition(const RealValue& k, const RealValue& l, const RealValue& B, const Natural& g,
                         const RealValue& a1, const RealValue& a2, const Natural& p);

/// log g + log(1/a1 + 1/a2) + 3/2 - log 2 - (1/2) log k + eps.
Interval log_b_upper_bound(const Natural& g, const RealValue& a1, const RealValue& a2, const RealValue& k,
                           const RealValue& eps, mpfr_prec_t prec = kBasePrecision);
inline constexpr const char* kDefaultEpsK = "1e-30";

struct FallbackBound {
  Natural g0;                // residual order of q mod p
  Interval order_bound;      // g0 log q / log p
  Interval chain_bound;      // g L a2 log q / log p
  bool order_bound_smaller = true;
};

/// When the distinct-sums condition fails, the valuation is bounded
/// trivially through the residual order g0 of q.
FallbackBound residual_order_fallback(const Natural& p, const Natural& q, const Natural& g, const RealValue& a1,
                                      const RealValue& a2, const Natural& L);

}  // namespace fqval
