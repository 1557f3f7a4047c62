#include "fqval/certificate.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "fqval/arith.hpp"
#include "fqval/errors.hpp"

namespace fqval {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

Integer mod_floor(const Integer& a, const Natural& m) {
  if (m < 1) throw DomainError("modulus g must be positive");
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

// Membership test for m1 r + m2 s == c (mod g), with a machine-word fast
// path for moduli below 2^63.
class ResidueFilter {
 public:
  ResidueFilter(const Integer& m1, const Integer& m2, const Integer& c, const Natural& g)
      : g_(g), m1_(mod_floor(m1, g)), m2_(mod_floor(m2, g)), c_(mod_floor(c, g)) {
    small_ = mpz_sizeinbase(g.get_mpz_t(), 2) <= 63;
    if (small_) {
      gs_ = to_u64(g_, "g");
      m1s_ = to_u64(m1_, "m1");
      m2s_ = to_u64(m2_, "m2");
      cs_ = to_u64(c_, "c");
    }
  }

  bool operator()(u64 r, u64 s) const {
    if (small_) {
      u128 v = static_cast<u128>(m1s_) * r + static_cast<u128>(m2s_) * s;
      return static_cast<u64>(v % gs_) == cs_;
    }
    Integer v = m1_ * Natural(r) + m2_ * Natural(s) - c_;
    return mpz_divisible_p(v.get_mpz_t(), g_.get_mpz_t()) != 0;
  }

 private:
  Natural g_;
  Integer m1_, m2_, c_;
  bool small_ = false;
  u64 gs_ = 1, m1s_ = 0, m2s_ = 0, cs_ = 0;
};

void check_grid(const Natural& rows, const Natural& cols, const char* what) {
  if (Natural(rows * cols) > Natural(static_cast<unsigned long>(kCountCap)))
    throw CapExceeded(std::string(what) + ": grid of " + to_decimal(Natural(rows * cols)) + " points exceeds the cap of 10^7");
}

// Exponent vectors of a and b over the union of their prime supports.
std::pair<std::vector<long>, std::vector<long>> exponent_vectors(const Natural& a, const Natural& b) {
  auto fa = factorize(a);
  auto fb = factorize(b);
  std::vector<Natural> primes;
  for (auto& [q, e] : fa) primes.push_back(q);
  for (auto& [q, e] : fb) primes.push_back(q);
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  std::vector<long> ea(primes.size(), 0), eb(primes.size(), 0);
  auto index = [&](const Natural& q) {
    return static_cast<std::size_t>(std::lower_bound(primes.begin(), primes.end(), q) - primes.begin());
  };
  for (auto& [q, e] : fa) ea[index(q)] = static_cast<long>(e);
  for (auto& [q, e] : fb) eb[index(q)] = static_cast<long>(e);
  return {ea, eb};
}

Interval log_natural(const Natural& n, mpfr_prec_t prec) { return log(Interval::exact(n, prec)); }

// 1/12 - log A with A the Glaisher-Kinkelin constant; the decimal below is
// truncated, so the enclosure is widened by 1e-49.
Interval zeta_prime_minus_one(mpfr_prec_t prec) {
  const char* glaisher = "1.28242712910062263687534256886979172776768892732500";
  Interval slack = Interval::decimal("1e-49", prec);
  Interval a = hull(Interval::decimal(glaisher, prec) - slack, Interval::decimal(glaisher, prec) + slack);
  return Interval::exact(1L, prec) / Interval::exact(12L, prec) - log(a);
}

}  // namespace

CertificateParams make_certificate_params(const Natural& p, const Natural& alpha1, const Natural& alpha2,
                                          const Natural& K, const Natural& L, const Natural& R1,
                                          const Natural& R2, const Natural& S1, const Natural& S2,
                                          const Natural& b1, const Natural& b2, const Integer& c1,
                                          const Integer& c2) {
  Natural g = lcm(mul_order(alpha1, p).order, mul_order(alpha2, p).order);
  return {p, alpha1, alpha2, discrete_log(alpha1, p), discrete_log(alpha2, p), g, K, L, R1, R2, S1, S2, b1, b2, c1, c2};
}

void validate_certificate(const CertificateParams& c) {
  require_prime(c.p, "certificate p");
  for (const Natural* a : {&c.alpha1, &c.alpha2}) {
    if (*a < 1) throw DomainError("certificate alphas must be positive");
    if (mpz_divisible_p(a->get_mpz_t(), c.p.get_mpz_t())) throw DomainError("p divides an alpha");
  }
  if (c.g < 1) throw DomainError("g must be positive");
  if (powm(c.alpha1, c.g, c.p) != 1 || powm(c.alpha2, c.g, c.p) != 1)
    throw DomainError("alpha1^g and alpha2^g must both be 1 mod p");
  Natural rho = smallest_primitive_root(c.p);
  if (powm(rho, c.m1, c.p) != c.alpha1 % c.p) throw DomainError("alpha1 is not zeta^m1 mod p");
  if (powm(rho, c.m2, c.p) != c.alpha2 % c.p) throw DomainError("alpha2 is not zeta^m2 mod p");
  if (c.b1 < 1 || c.b2 < 1) throw DomainError("b1, b2 must be positive");
  if (gcd(gcd(c.b1, c.b2), c.p) != 1) throw DomainError("gcd(b1, b2, p) must be 1");
  if (c.K < 3) throw DomainError("K must be >= 3");
  if (c.L < 2) throw DomainError("L must be >= 2");
  for (const Natural* v : {&c.R1, &c.R2, &c.S1, &c.S2})
    if (*v < 0) throw DomainError("R1, R2, S1, S2 must be nonnegative");
}

std::uint64_t count_alpha_products(const CertificateParams& c) {
  check_grid(c.R1, c.S1, "count_alpha_products");
  if (c.alpha1 < 1 || c.alpha2 < 1) throw DomainError("alphas must be positive");
  const u64 rows = to_u64(c.R1, "R1"), cols = to_u64(c.S1, "S1");
  ResidueFilter in_class(c.m1, c.m2, c.c1, c.g);

  // Equal products alpha1^r alpha2^s are equal exponent vectors
  // r*e1 + s*e2 over the joint prime support. If e1, e2 are independent
  // every admissible pair gives a distinct product; otherwise both are
  // multiples u*f, v*f of one primitive vector and the product is f^(u r + v s).
  auto [e1, e2] = exponent_vectors(c.alpha1, c.alpha2);
  bool dependent = true;
  for (std::size_t i = 0; i < e1.size() && dependent; ++i)
    for (std::size_t j = i + 1; j < e1.size(); ++j)
      if (e1[i] * e2[j] != e1[j] * e2[i]) {
        dependent = false;
        break;
      }

  if (!dependent) {
    u64 n = 0;
    for (u64 r = 0; r < rows; ++r)
      for (u64 s = 0; s < cols; ++s)
        if (in_class(r, s)) ++n;
    return n;
  }

  long u = 0, v = 0;
  long g1 = 0, g2 = 0;
  for (auto x : e1) g1 = std::gcd(g1, x);
  for (auto x : e2) g2 = std::gcd(g2, x);
  if (g1 != 0 || g2 != 0) {
    const auto& base = g1 != 0 ? e1 : e2;
    const long content = g1 != 0 ? g1 : g2;
    for (std::size_t i = 0; i < base.size(); ++i) {
      const long f = base[i] / content;  // primitive direction
      if (f == 0) continue;
      u = e1[i] / f;
      v = e2[i] / f;
      break;
    }
  }
  std::vector<__int128> keys;
  for (u64 r = 0; r < rows; ++r)
    for (u64 s = 0; s < cols; ++s)
      if (in_class(r, s)) keys.push_back(static_cast<__int128>(u) * r + static_cast<__int128>(v) * s);
  std::sort(keys.begin(), keys.end());
  return static_cast<u64>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

std::uint64_t count_linear_forms(const CertificateParams& c) {
  check_grid(c.R2, c.S2, "count_linear_forms");
  const u64 rows = to_u64(c.R2, "R2"), cols = to_u64(c.S2, "S2");
  ResidueFilter in_class(c.m1, c.m2, c.c2, c.g);
  if (fits_u64(c.b1) && fits_u64(c.b2)) {
    const u64 b1 = to_u64(c.b1, "b1"), b2 = to_u64(c.b2, "b2");
    std::vector<u128> values;
    for (u64 r = 0; r < rows; ++r)
      for (u64 s = 0; s < cols; ++s)
        if (in_class(r, s)) values.push_back(static_cast<u128>(b2) * r + static_cast<u128>(b1) * s);
    std::sort(values.begin(), values.end());
    return static_cast<u64>(std::unique(values.begin(), values.end()) - values.begin());
  }
  std::vector<Natural> values;
  for (u64 r = 0; r < rows; ++r)
    for (u64 s = 0; s < cols; ++s)
      if (in_class(r, s)) values.emplace_back(c.b2 * Natural(r) + c.b1 * Natural(s));
  std::sort(values.begin(), values.end());
  return static_cast<u64>(std::unique(values.begin(), values.end()) - values.begin());
}

Interval log_superfactorial(const Natural& K, mpfr_prec_t prec) {
  if (K < 2) throw DomainError("log_superfactorial: K must be >= 2");
  if (K <= static_cast<unsigned long>(kSuperfactorialCrossover)) {
    // sum_{j=2}^{K-1} (K - j) log j
    const unsigned long k = K.get_ui();
    Interval total = Interval::exact(0L, prec);
    for (unsigned long j = 2; j < k; ++j)
      total = total + Interval::exact(static_cast<long>(k - j), prec) * log(Interval::exact(static_cast<long>(j), prec));
    return total;
  }
  return log_superfactorial_asymptotic(K, prec);
}

Interval log_superfactorial_asymptotic(const Natural& K, mpfr_prec_t prec) {
  if (K < 2) throw DomainError("log_superfactorial: K must be >= 2");
  // log G(n+1) = (n^2/2 - 1/12) log n - 3n^2/4 + (n/2) log(2 pi) + zeta'(-1)
  //              - 1/(240 n^2) + R,   |R| <= 1/n^4.
  const Interval n = Interval::exact(K, prec);
  const Interval n2 = n * n;
  const Interval one = Interval::exact(1L, prec);
  const Interval logn = log(n);
  Interval v = (n2 / Interval::exact(2L, prec) - one / Interval::exact(12L, prec)) * logn;
  v = v - Interval::exact(3L, prec) * n2 / Interval::exact(4L, prec);
  v = v + n / Interval::exact(2L, prec) * log(Interval::exact(2L, prec) * Interval::pi(prec));
  v = v + zeta_prime_minus_one(prec);
  v = v - one / (Interval::exact(240L, prec) * n2);
  const Interval rem = one / (n2 * n2);
  return hull(v - rem, v + rem);
}

Interval log_b(const Integer& R, const Integer& S, const Natural& b1, const Natural& b2, const Natural& K,
               mpfr_prec_t prec) {
  if (K < 2) throw DomainError("log_b: K must be >= 2");
  Integer numerator = (R - 1) * b2 + (S - 1) * b1;
  if (numerator <= 0) throw DegenerateB();
  const Interval half_num = Interval::exact(numerator, prec) / Interval::exact(2L, prec);
  const Interval scale = Interval::exact(2L, prec) / Interval::exact(Natural(K * K - K), prec);
  return log(half_num) - scale * log_superfactorial(K, prec);
}

DerivedCertQuantities derive_quantities(const CertificateParams& c, mpfr_prec_t prec) {
  Integer R = c.R1 + c.R2 - 1;
  Integer S = c.S1 + c.S2 - 1;
  return {R, S, Natural(c.K * c.L), log_b(R, S, c.b1, c.b2, c.K, prec)};
}

Interval compute_log_b(const CertificateParams& c, mpfr_prec_t prec) { return derive_quantities(c, prec).log_b; }

Truth main_inequality(const Natural& p, const Natural& K, const Natural& L, const Integer& R, const Integer& S,
                      const Natural& b1, const Natural& b2, const Natural& alpha1, const Natural& alpha2) {
  if (p < 2 || alpha1 < 1 || alpha2 < 1) throw DomainError("main_inequality: p >= 2 and alphas >= 1 required");
  if (K < 2 || L < 1) throw DomainError("main_inequality: K >= 2 and L >= 1 required");
  // Surface DegenerateB before entering the precision loop.
  (void)log_b(R, S, b1, b2, K, 53);
  return decide_with_escalation([&](mpfr_prec_t prec) {
    auto X = [prec](const mpz_class& v) { return Interval::exact(v, prec); };
    const Interval lhs = X(K) * X(Natural(L - 1)) * log_natural(p, prec);
    Interval rhs = X(3) * log_natural(Natural(K * L), prec);
    rhs = rhs + X(Natural(K - 1)) * log_b(R, S, b1, b2, K, prec);
    rhs = rhs + X(L) * (X(Integer(R - 1)) * log_natural(alpha1, prec) + X(Integer(S - 1)) * log_natural(alpha2, prec));
    return greater(lhs, rhs);
  });
}

Truth check_main_inequality(const CertificateParams& c) {
  return main_inequality(c.p, c.K, c.L, Integer(c.R1 + c.R2 - 1), Integer(c.S1 + c.S2 - 1), c.b1, c.b2, c.alpha1,
                         c.alpha2);
}

const char* to_string(Condition c) {
  switch (c) {
    case Condition::AlphaProducts:
      return "alpha_products";
    case Condition::LinearForms:
      return "linear_forms";
    case Condition::MainInequality:
      return "main_inequality";
  }
  return "?";
}

CertificateVerdict verify_certificate(const CertificateParams& c) {
  validate_certificate(c);
  CertificateVerdict v;
  v.target = "v_p(Lambda), Lambda = b2*log_p(alpha1) - b1*log_p(alpha2); concretely v_p(alpha1^b2 - alpha2^b1)";
  v.bound = c.K * c.L - 1;

  v.alpha_products = count_alpha_products(c);
  const Natural need1 = c.L;
  Truth t1 = Natural(static_cast<unsigned long>(v.alpha_products)) >= need1 ? Truth::Holds : Truth::Fails;
  v.outcomes.push_back({Condition::AlphaProducts, t1,
                        std::to_string(v.alpha_products) + " distinct products, need " + to_decimal(need1)});

  v.linear_forms = count_linear_forms(c);
  const Natural need2 = (c.K - 1) * c.L;
  Truth t2 = Natural(static_cast<unsigned long>(v.linear_forms)) >= need2 ? Truth::Holds : Truth::Fails;
  v.outcomes.push_back({Condition::LinearForms, t2,
                        std::to_string(v.linear_forms) + " distinct values, need " + to_decimal(need2)});

  Truth t3 = check_main_inequality(c);
  v.outcomes.push_back({Condition::MainInequality, t3, std::string("size inequality ") + to_string(t3)});

  for (const auto& o : v.outcomes)
    if (o.outcome != Truth::Holds) v.failing.push_back(o.condition);
  v.certified = v.failing.empty();
  return v;
}

LemmaBounds lemma10_bounds(const LemmaInstance& in) {
  if (in.K < 1 || in.L < 1 || in.R < 1 || in.S < 1 || in.g < 1)
    throw DomainError("lemma instance: K, L, R, S, g must be >= 1");
  if (std::gcd(std::gcd(in.m1, in.m2), in.g) != 1) throw DomainError("lemma instance: gcd(m1, m2, g) must be 1");
  const long N = in.K * in.L;
  if (static_cast<long>(in.pairs.size()) != N)
    throw DomainError("lemma instance: expected K*L = " + std::to_string(N) + " pairs");
  auto mod = [](long a, long m) { return ((a % m) + m) % m; };
  for (const auto& [r, s] : in.pairs) {
    if (r < 0 || r > in.R - 1 || s < 0 || s > in.S - 1) throw DomainError("lemma instance: pair out of range");
    if (mod(in.m1 * r + in.m2 * s - in.c, in.g) != 0) throw DomainError("lemma instance: pair outside the residue class");
  }

  LemmaBounds out;
  mpz_class sum_r = 0, sum_s = 0;
  out.sum_lr = 0;
  out.sum_ls = 0;
  for (long j = 0; j < N; ++j) {
    const long lj = j / in.K;
    sum_r += in.pairs[j].first;
    sum_s += in.pairs[j].second;
    out.sum_lr += mpz_class(lj) * in.pairs[j].first;
    out.sum_ls += mpz_class(lj) * in.pairs[j].second;
  }
  out.M1 = mpq_class(mpz_class(in.L - 1) * sum_r, 2);
  out.M2 = mpq_class(mpz_class(in.L - 1) * sum_s, 2);
  out.G1 = mpq_class(mpz_class(N) * in.L * (in.R - 1), 4);
  out.G2 = mpq_class(mpz_class(N) * in.L * (in.S - 1), 4);
  out.M1.canonicalize();
  out.M2.canonicalize();
  out.G1.canonicalize();
  out.G2.canonicalize();
  const mpq_class lr(out.sum_lr), ls(out.sum_ls);
  out.within = out.M1 - out.G1 <= lr && lr <= out.M1 + out.G1 && out.M2 - out.G2 <= ls && ls <= out.M2 + out.G2;
  return out;
}

namespace {

void require_positive(const RealValue& v, const char* name) {
  if (!v.at(kBasePrecision).certainly_positive()) throw DomainError(std::string(name) + " must be positive");
}

Natural floor_plus(const std::function<Interval(mpfr_prec_t)>& eval, long add) {
  return certain_floor(eval) + add;
}

Natural floor_q(const mpq_class& q) {
  Natural f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return f;
}

bool all_exact(std::initializer_list<const RealValue*> vs) {
  for (auto* v : vs)
    if (!v->exact()) return false;
  return true;
}

}  // namespace

ParamSelection select_parameters(const RealValue& k, const RealValue& l, const RealValue& B, const Natural& g,
                                 const RealValue& a1, const RealValue& a2) {
  require_positive(k, "k");
  require_positive(l, "l");
  require_positive(B, "B");
  require_positive(a1, "a1");
  require_positive(a2, "a2");
  if (g < 1) throw DomainError("g must be >= 1");

  // Rational inputs are floored exactly: an interval enclosure can never
  // certify the floor of a value that is itself an integer.
  const bool exact = all_exact({&k, &l, &B, &a1, &a2});
  auto G = [&](mpfr_prec_t prec) { return Interval::exact(g, prec); };
  const Natural L = exact ? Natural(floor_q(*l.exact() * *B.exact()) + 2)
                          : floor_plus([&](mpfr_prec_t prec) { return l.at(prec) * B.at(prec); }, 2);
  const Natural K =
      exact ? Natural(floor_q(*k.exact() * mpq_class(g * L) * *a1.exact() * *a2.exact()) + 1)
            : floor_plus([&](mpfr_prec_t prec) {
                return k.at(prec) * G(prec) * Interval::exact(L, prec) * a1.at(prec) * a2.at(prec);
              }, 1);
  if (mpz_sizeinbase(K.get_mpz_t(), 2) > kMaxSelectionBits)
    throw CapExceeded("select_parameters: K exceeds the evaluation budget");
  if (K < 2) throw DomainError("select_parameters: selection gives K < 2, b is undefined");

  // floor(sqrt(q)) = isqrt(floor(q)) for rational q >= 0.
  auto root = [&](const Natural& scale, const RealValue& num, const RealValue& den) {
    if (exact) {
      Natural r;
      mpz_sqrt(r.get_mpz_t(), floor_q(mpq_class(g * scale) * *num.exact() / *den.exact()).get_mpz_t());
      return Natural(r + 1);
    }
    return floor_plus(
        [&](mpfr_prec_t prec) {
          return sqrt(G(prec) * Interval::exact(scale, prec) * num.at(prec) / den.at(prec));
        },
        1);
  };
  const Natural KL1 = (K - 1) * L;
  const Natural R1 = root(L, a2, a1);
  const Natural S1 = root(L, a1, a2);
  const Natural R2 = root(KL1, a2, a1);
  const Natural S2 = root(KL1, a1, a2);
  const Natural R = R1 + R2 - 1, S = S1 + S2 - 1;
  Interval lb = log_b(R, S, g, g, K);
  return {k, l, B, g, a1, a2, L, K, R1, S1, R2, S2, R, S, Natural(K * L), lb};
}

Truth check_kl_condition(const RealValue& k, const RealValue& l, const RealValue& B, const Natural& g,
                         const RealValue& a1, const RealValue& a2, const Natural& p) {
  require_positive(k, "k");
  require_positive(l, "l");
  require_positive(B, "B");
  require_positive(a1, "a1");
  require_positive(a2, "a2");
  if (g < 1) throw DomainError("g must be >= 1");
  require_prime(p, "check_kl_condition: p");
  return decide_with_escalation([&](mpfr_prec_t prec) {
    const Interval kk = k.at(prec), BB = B.at(prec);
    const Interval lB = l.at(prec) * BB;
    std::optional<mpz_class> f1, f2;
    if (l.exact() && B.exact()) {
      const Natural fl = floor_q(*l.exact() * *B.exact());
      f1 = fl + 1;
      f2 = fl + 2;
    } else {
      f1 = (lB + Interval::exact(1L, prec)).certain_floor();
      f2 = (lB + Interval::exact(2L, prec)).certain_floor();
    }
    if (!f1 || !f2) return Truth::Undecided;
    const Interval F1 = Interval::exact(*f1, prec), F2 = Interval::exact(*f2, prec);
    const Interval two = Interval::exact(2L, prec);
    const Interval gaa = Interval::exact(g, prec) * a1.at(prec) * a2.at(prec);
    const Interval lhs = kk * F1 * F2 - kk * F2 * BB;
    const Interval t1 = two * F2 * F2 * sqrt(kk);
    const Interval t2 = two * F2 * sqrt(F2) / sqrt(gaa);
    const Interval t3 =
        Interval::exact(3L, prec) * log(gaa * kk * F2 * F2 + F2) / (gaa * log(Interval::exact(p, prec)));
    return greater_equal(lhs, t1 + t2 + t3);
  });
}

Interval log_b_upper_bound(const Natural& g, const RealValue& a1, const RealValue& a2, const RealValue& k,
                           const RealValue& eps, mpfr_prec_t prec) {
  require_positive(a1, "a1");
  require_positive(a2, "a2");
  require_positive(k, "k");
  if (g < 1) throw DomainError("g must be >= 1");
  const Interval e = eps.at(prec);
  if (e.certainly_negative()) throw DomainError("eps must be nonnegative");
  const Interval one = Interval::exact(1L, prec), two = Interval::exact(2L, prec);
  Interval v = log(Interval::exact(g, prec)) + log(one / a1.at(prec) + one / a2.at(prec));
  v = v + Interval::exact(3L, prec) / two - log(two) - log(k.at(prec)) / two;
  return v + e;
}

FallbackBound residual_order_fallback(const Natural& p, const Natural& q, const Natural& g, const RealValue& a1,
                                      const RealValue& a2, const Natural& L) {
  require_prime(p, "residual_order_fallback: p");
  if (q < 1) throw DomainError("q must be positive");
  if (mpz_divisible_p(q.get_mpz_t(), p.get_mpz_t())) throw DomainError("residual_order_fallback: p divides q");
  require_positive(a1, "a1");
  require_positive(a2, "a2");
  FallbackBound out;
  out.g0 = mul_order(q, p).order;
  const mpfr_prec_t prec = kBasePrecision;
  const Interval ratio = log_natural(q, prec) / log_natural(p, prec);
  out.order_bound = Interval::exact(out.g0, prec) * ratio;
  out.chain_bound = Interval::exact(g, prec) * Interval::exact(L, prec) * a2.at(prec) * ratio;
  out.order_bound_smaller = greater(out.chain_bound, out.order_bound) != Truth::Fails;
  return out;
}

}  // namespace fqval
