#include "fqval/divisor.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fqval/arith.hpp"
#include "fqval/bounds.hpp"
#include "fqval/errors.hpp"
#include "parallel.hpp"

namespace fqval {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Interval L(const Natural& n, mpfr_prec_t prec) { return log(Interval::exact(n, prec)); }

void require_multiperfect(const FactoredInteger& N, const Abundancy& alpha) {
  if (alpha.n < 1 || alpha.d < 1) throw DomainError("abundancy n/d must be positive");
  if (N.sigma() * alpha.d != alpha.n * N.value())
    throw DomainError("sigma(N) * d != n * N for N = " + N.str());
}

}  // namespace

FactoredInteger::FactoredInteger(std::vector<PrimePower> factors) : factors_(std::move(factors)) {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    require_prime(factors_[i].prime, "factor");
    if (factors_[i].exponent < 1) throw DomainError("factor exponents must be >= 1");
    if (i > 0 && factors_[i - 1].prime >= factors_[i].prime)
      throw DomainError("factor primes must be strictly increasing");
  }
}

FactoredInteger FactoredInteger::factor(const Natural& n) {
  std::vector<PrimePower> f;
  for (auto& [q, e] : factorize(n)) f.push_back({q, e});
  return FactoredInteger(std::move(f));
}

FactoredInteger FactoredInteger::parse(std::string_view text) {
  std::vector<PrimePower> f;
  std::string_view rest = text;
  while (true) {
    auto star = rest.find('*');
    std::string_view token = trim(rest.substr(0, star));
    if (token.empty()) throw DomainError("malformed factorization: '" + std::string(text) + "'");
    auto caret = token.find('^');
    PrimePower pp;
    pp.prime = parse_natural(trim(token.substr(0, caret)));
    if (caret != std::string_view::npos) {
      Natural e = parse_natural(trim(token.substr(caret + 1)));
      pp.exponent = to_u64(e, "exponent");
    }
    f.push_back(pp);
    if (star == std::string_view::npos) break;
    rest = rest.substr(star + 1);
  }
  std::sort(f.begin(), f.end(), [](const PrimePower& a, const PrimePower& b) { return a.prime < b.prime; });
  return FactoredInteger(std::move(f));
}

Natural FactoredInteger::value() const {
  Natural v = 1;
  for (const auto& f : factors_) v *= pow(f.prime, f.exponent);
  return v;
}

Natural FactoredInteger::sigma() const {
  Natural s = 1;
  for (const auto& f : factors_) s *= sigma_prime_power(f.prime, f.exponent);
  return s;
}

std::string FactoredInteger::str() const {
  if (factors_.empty()) return "1";
  std::string out;
  for (const auto& f : factors_) {
    if (!out.empty()) out += " * ";
    out += to_decimal(f.prime);
    if (f.exponent != 1) out += "^" + std::to_string(f.exponent);
  }
  return out;
}

Abundancy abundancy(const FactoredInteger& N) {
  mpq_class a(N.sigma(), N.value());
  a.canonicalize();
  return {a.get_num(), a.get_den(), true};
}

NagellResult nagell_check(const Natural& p, const Natural& q, unsigned long c) {
  require_prime(p, "nagell_check: p");
  if (q == 2) throw DomainError("nagell_check: q must be odd");
  require_prime(q, "nagell_check: q");
  if (p == q) throw DomainError("nagell_check: p must differ from q");
  if (c < 1) throw DomainError("nagell_check: c must be >= 1");
  NagellResult r;
  r.lhs = vp(sigma_prime_power(q, c), p).exponent;
  r.rhs = fermat_quotient_valuation(q, p).exponent + vp(Natural(c + 1), p).exponent;
  r.holds = r.lhs <= r.rhs;
  return r;
}

std::vector<NagellRow> nagell_scan(std::uint64_t p_min, std::uint64_t p_max, std::uint64_t q_min,
                                   std::uint64_t q_max, std::uint64_t c_max, unsigned workers) {
  const auto ps = primes_in_range(p_min, p_max);
  std::vector<std::uint64_t> qs;
  for (auto q : primes_in_range(std::max<std::uint64_t>(q_min, 3), q_max)) qs.push_back(q);
  std::vector<std::vector<NagellRow>> per_p(ps.size());
  detail::parallel_for(ps.size(), workers, [&](std::size_t i) {
    const Natural p = static_cast<unsigned long>(ps[i]);
    for (auto q : qs) {
      if (q == ps[i]) continue;
      for (std::uint64_t c = 1; c <= c_max; ++c)
        per_p[i].push_back({ps[i], q, c, nagell_check(p, Natural(static_cast<unsigned long>(q)), c)});
    }
  });
  std::vector<NagellRow> rows;
  for (auto& v : per_p) rows.insert(rows.end(), v.begin(), v.end());
  return rows;
}

void write_nagell_csv(std::ostream& out, const std::vector<NagellRow>& rows) {
  out << "p,q,c,lhs,rhs\n";
  for (const auto& r : rows) out << r.p << ',' << r.q << ',' << r.c << ',' << r.result.lhs << ',' << r.result.rhs << '\n';
}

Natural thm3_bound(const Natural& p, const Natural& q, unsigned long c) {
  require_prime(p, "thm3_bound: p");
  require_prime(q, "thm3_bound: q");
  if (p == q) throw DomainError("thm3_bound: p must differ from q");
  if (c < 1) throw DomainError("thm3_bound: c must be >= 1");
  const Natural base = q == 2 ? thm2_bound_base2(p).bound : thm2_bound_odd_prime(q, p).bound;
  return base + vp(Natural(c + 1), p).exponent;
}

Interval conj_thm3_bound(const Natural& p, const Natural& q, unsigned long c) {
  if (c < 1) throw DomainError("conj_thm3_bound: c must be >= 1");
  Interval b = conj1_bound_prime(q, p);
  return Interval::exact(static_cast<long>(vp(Natural(c + 1), p).exponent)) + b;
}

unsigned long sigma_valuation(const Natural& p, const FactoredInteger& N) {
  require_prime(p, "sigma_valuation: p");
  unsigned long v = 0;
  for (const auto& f : N.factors()) v += vp(sigma_prime_power(f.prime, f.exponent), p).exponent;
  return v;
}

namespace {

// log of the eq08-style right-hand side divided by C.
Interval thm4_log_rhs_per_unit_c(const FactoredInteger& N, const Abundancy& alpha, mpfr_prec_t prec) {
  const auto& f = N.factors();
  const std::size_t k = f.size();
  const Natural& pk = f[k - 1].prime;
  const Natural& pk1 = f[k - 2].prime;
  Interval sum_log_lower = Interval::exact(0L, prec);
  for (std::size_t i = 0; i + 1 < k; ++i) sum_log_lower = sum_log_lower + L(f[i].prime, prec);
  const Interval X = Interval::exact(Natural(pk - 1), prec) / L(pk, prec) * sum_log_lower +
                     Interval::exact(Natural(pk1 - 1), prec) / L(pk1, prec) * L(pk, prec);
  return L(alpha.d, prec) + Interval::exact(static_cast<long>(k - 1), prec) * X;
}

}  // namespace

Thm4Result thm4_bound_eq08(const FactoredInteger& N, const Abundancy& alpha, const RealValue& C) {
  if (N.size() < 2) throw DomainError("thm4_bound_eq08: needs at least two distinct prime factors");
  require_multiperfect(N, alpha);
  const Natural value = N.value();
  Thm4Result r;
  r.log_rhs = C.at(kBasePrecision) * thm4_log_rhs_per_unit_c(N, alpha, kBasePrecision);
  r.rhs = std::exp(r.log_rhs.mid());
  r.holds = decide_with_escalation([&](mpfr_prec_t prec) {
              return less_equal(L(value, prec), C.at(prec) * thm4_log_rhs_per_unit_c(N, alpha, prec));
            }) == Truth::Holds;
  return r;
}

double thm4_min_constant(const FactoredInteger& N, const Abundancy& alpha) {
  auto holds = [&](double C) { return thm4_bound_eq08(N, alpha, RealValue::from_double(C)).holds; };
  double lo = 0, hi = 1;
  while (!holds(hi)) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1e-7) {
    const double mid = lo + (hi - lo) / 2;
    if (holds(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

Thm4ConjResult thm4_bound_eq09(const FactoredInteger& N, const Abundancy& alpha, const RealValue& Cprime) {
  if (N.size() < 1) throw DomainError("thm4_bound_eq09: N must have at least one prime factor");
  require_multiperfect(N, alpha);
  const mpfr_prec_t prec = kBasePrecision;
  const long k = static_cast<long>(N.size());
  const Interval e = Interval::euler(prec);
  const Interval ratio = e / (e - Interval::exact(2L, prec));
  const Interval K = Interval::exact(k, prec);
  Interval sum_log = Interval::exact(0L, prec), E = Interval::exact(0L, prec);
  for (const auto& f : N.factors()) {
    sum_log = sum_log + L(f.prime, prec);
    E = E + Interval::exact(static_cast<long>(f.exponent + 1), prec) * L(f.prime, prec);
  }
  const Interval log_d = L(alpha.d, prec);
  const Interval k_log_k = K * log(K);
  const Interval kc_sum = K * Cprime.at(prec) * sum_log;

  Thm4ConjResult r{K * K, ratio * (log_d - k_log_k) + kc_sum, Interval(prec), false, E, Interval(prec)};
  r.log_rhs = max(r.log_first, r.log_second);
  r.holds = greater(r.log_rhs, L(N.value(), prec)) == Truth::Holds;
  r.E_chain_bound = max(r.log_first, ratio * (log_d - k_log_k + kc_sum));
  return r;
}

ExponentCheck primitive_exponent_check(const FactoredInteger& N) {
  if (N.size() < 1 || N.sigma() != 2 * N.value())
    throw DomainError("primitive_exponent_check: N = " + N.str() + " is not perfect");
  const Natural& pk = N.factors().back().prime;
  ExponentCheck out;
  for (const auto& f : N.factors()) {
    if (Natural(2 * Natural(f.exponent)) > pk - 1) {
      out.holds = false;
      out.violations.push_back(f);
    }
  }
  return out;
}

std::vector<FactoredInteger> load_perfect_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open perfect-number table: " + path);
  std::vector<FactoredInteger> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    try {
      out.push_back(FactoredInteger::parse(t));
    } catch (const DomainError& e) {
      throw DomainError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::string default_perfect_table_path() { return std::string(FQVAL_DATA_DIR) + "/perfect_numbers.txt"; }

}  // namespace fqval
