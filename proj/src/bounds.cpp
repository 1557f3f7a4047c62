#include "fqval/bounds.hpp"

#include <cfloat>
#include <cmath>

#include "fqval/arith.hpp"
#include "fqval/errors.hpp"
#include "json.hpp"
#include "parallel.hpp"

namespace fqval {

namespace {

Interval L(const Natural& n, mpfr_prec_t prec) { return log(Interval::exact(n, prec)); }

void require_coprime_to(const Natural& x, const Natural& p, const char* what) {
  if (gcd(x, p) != 1) throw DomainError(std::string(what) + ": gcd must be 1");
}

}  // namespace

const char* to_string(BoundFormula f) {
  switch (f) {
    case BoundFormula::General:
      return "general";
    case BoundFormula::OddPrime:
      return "odd_prime";
    case BoundFormula::Base2:
      return "base2";
  }
  return "?";
}

BoundResult thm2_bound(const Natural& p, const Natural& x, const Natural& y) {
  require_prime(p, "thm2_bound: p");
  if (x < 2 || y < 2) throw DomainError("thm2_bound: x, y must be >= 2");
  require_coprime_to(x, y, "thm2_bound: x, y");
  const Natural xy = x * y;
  Natural f = certain_floor([&](mpfr_prec_t prec) {
    const Interval lp = L(p, prec);
    return Interval::exact(kBoundConstant, prec) * Interval::exact(Natural(p - 1), prec) * (L(y, prec) / lp) *
           (L(xy, prec) / lp);
  });
  return {p, x, y, Natural(f + 4), BoundFormula::General};
}

BoundResult thm2_bound_odd_prime(const Natural& q, const Natural& p) {
  if (q == 2) throw DomainError("thm2_bound_odd_prime: q = 2 is covered by thm2_bound_base2");
  require_prime(q, "thm2_bound_odd_prime: q");
  if (q == p) throw DomainError("thm2_bound_odd_prime: q must differ from p");
  BoundResult r = thm2_bound(p, q, 2);
  r.formula = BoundFormula::OddPrime;
  return r;
}

BoundResult thm2_bound_base2(const Natural& p) {
  if (p == 2) throw DomainError("thm2_bound_base2: p must be odd");
  BoundResult r = thm2_bound(p, 2, 3);
  r.formula = BoundFormula::Base2;
  return r;
}

Natural default_auxiliary_base(const Natural& x) {
  for (Natural y = 2;; mpz_nextprime(y.get_mpz_t(), y.get_mpz_t()))
    if (gcd(x, y) == 1) return y;
}

BoundResult thm2_bound_for_base(const Natural& x, const Natural& p) {
  if (x == 2) return thm2_bound_base2(p);
  if (is_prime(x) && x != p) return thm2_bound_odd_prime(x, p);
  return thm2_bound(p, x, default_auxiliary_base(x));
}

Interval conj1_bound(const Natural& x, const Natural& p, mpfr_prec_t prec) {
  require_prime(p, "conj1_bound: p");
  if (p == 2) throw DomainError("conj1_bound: p = 2 is not supported (log log 2 < 0)");
  if (x < 2) throw DomainError("conj1_bound: x must be >= 2");
  const Interval lx = L(x, prec), lp = L(p, prec);
  return Interval::exact(2L, prec) + (lx + Interval::exact(2L, prec) * log(lx) + log(lp)) / lp;
}

Interval conj1_bound_prime(const Natural& q, const Natural& p, mpfr_prec_t prec) {
  require_prime(p, "conj1_bound_prime: p");
  require_prime(q, "conj1_bound_prime: q");
  if (p < 3 || q < 3) throw DomainError("conj1_bound_prime: p, q must be >= 3");
  if (p == q) throw DomainError("conj1_bound_prime: p must differ from q");
  const Interval lq = L(q, prec), lp = L(p, prec);
  return Interval::exact(2L, prec) + (lq + log(lq) + log(lp)) / lp;
}

Interval abc_threshold(const Natural& x, const Natural& p, const RealValue& eps, mpfr_prec_t prec) {
  require_prime(p, "abc_threshold: p");
  if (x < 2) throw DomainError("abc_threshold: x must be >= 2");
  const Interval one = Interval::exact(1L, prec);
  return one + (one + eps.at(prec) * Interval::exact(p, prec)) * L(x, prec) / L(p, prec);
}

HeuristicExponent heuristic_exponent(const Natural& x, const Natural& p, mpfr_prec_t prec) {
  if (x < 3) throw DomainError("heuristic_exponent: x must be >= 3");
  require_prime(p, "heuristic_exponent: p");
  if (p < 3) throw DomainError("heuristic_exponent: p must be >= 3");
  const Interval lx = L(x, prec), lp = L(p, prec);
  return {x, p, Interval::exact(2L, prec) + (lx + Interval::exact(2L, prec) * log(lx) + log(lp)) / lp};
}

HeuristicSum heuristic_partial_sum(std::uint64_t P, std::uint64_t X) {
  if (P < 3 || X < 3) throw DomainError("heuristic_partial_sum: caps must be >= 3");
  // Neumaier-compensated sums in long double. Each term carries a relative
  // error of a few hundred ulps at most (log, pow of a computed exponent);
  // the error radii below are conservative multiples of that.
  struct Acc {
    long double s = 0, c = 0, abs = 0;
    void add(long double t) {
      long double u = s + t;
      if (std::fabs(s) >= std::fabs(t))
        c += (s - u) + t;
      else
        c += (t - u) + s;
      s = u;
      abs += std::fabs(t);
    }
    long double value() const { return s + c; }
  };
  const long double eps = LDBL_EPSILON;
  const auto primes = primes_in_range(3, P);

  std::vector<long double> lx(X + 1), llx(X + 1);
  Acc x_side;
  for (std::uint64_t x = 3; x <= X; ++x) {
    lx[x] = std::log(static_cast<long double>(x));
    llx[x] = std::log(lx[x]);
    x_side.add(1.0L / (x * lx[x] * lx[x]));
  }
  Acc p_side, total;
  for (auto p : primes) {
    const long double lp = std::log(static_cast<long double>(p));
    const long double llp = std::log(lp);
    p_side.add(1.0L / (p * lp));
    for (std::uint64_t x = 3; x <= X; ++x) {
      const long double e = 2 + (lx[x] + 2 * llx[x] + llp) / lp;
      total.add(std::pow(static_cast<long double>(p), 1 - e));
    }
  }
  HeuristicSum out;
  out.sum = total.value();
  out.bound = p_side.value() * x_side.value();
  out.sum_error = 520 * eps * total.abs;
  out.bound_error = 512 * eps * out.bound;
  out.sum_le_bound = out.sum - out.sum_error <= out.bound + out.bound_error;
  return out;
}

std::vector<ConjectureViolation> conjecture_scan(std::uint64_t Xmax, std::uint64_t Pmax, unsigned workers) {
  if (Xmax < 2 || Pmax < 3) return {};
  const auto primes = primes_in_range(3, Pmax);
  constexpr std::size_t kPrimesPerBlock = 64;
  const std::size_t blocks = (primes.size() + kPrimesPerBlock - 1) / kPrimesPerBlock;
  std::vector<std::vector<ConjectureViolation>> found(blocks);
  detail::parallel_for(blocks, workers, [&](std::size_t b) {
    const std::size_t end = std::min(primes.size(), (b + 1) * kPrimesPerBlock);
    for (std::size_t i = b * kPrimesPerBlock; i < end; ++i) {
      const Natural p = static_cast<unsigned long>(primes[i]);
      for (std::uint64_t xv = 2; xv <= Xmax; ++xv) {
        if (xv % primes[i] == 0) continue;
        const Natural x = static_cast<unsigned long>(xv);
        const auto v = fermat_quotient_valuation(x, p).exponent;
        if (v < 2) continue;  // the bound always exceeds 2
        const Natural vn = v;
        Truth t = decide_with_escalation(
            [&](mpfr_prec_t prec) { return greater(Interval::exact(vn, prec), conj1_bound(x, p, prec)); });
        if (t == Truth::Holds) found[b].push_back({p, x, v, conj1_bound(x, p)});
      }
    }
  });
  std::vector<ConjectureViolation> out;
  for (auto& block : found)
    for (auto& v : block) out.push_back(std::move(v));
  return out;
}

std::string to_jsonl(const ConjectureViolation& v) {
  nlohmann::ordered_json j;
  j["p"] = to_decimal(v.p);
  j["x"] = to_decimal(v.x);
  j["v"] = v.valuation;
  j["bound"] = v.bound.mid();
  return j.dump();
}

}  // namespace fqval
