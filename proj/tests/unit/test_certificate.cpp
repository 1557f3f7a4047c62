#include <mpfr.h>

#include <random>

#include "doctest.h"
#include "fqval/arith.hpp"
#include "fqval/certificate.hpp"
#include "fqval/errors.hpp"
#include "fqval/json_io.hpp"
#include "oracles.hpp"

using namespace fqval;

namespace {

CertificateParams grid(unsigned long a1, unsigned long a2, long R1, long S1, long R2, long S2, long m1, long m2, long g,
                       long c1, long c2, unsigned long b1 = 1, unsigned long b2 = 1) {
  CertificateParams c;
  c.p = 5;
  c.alpha1 = a1;
  c.alpha2 = a2;
  c.m1 = m1;
  c.m2 = m2;
  c.g = g;
  c.K = 3;
  c.L = 2;
  c.R1 = R1;
  c.S1 = S1;
  c.R2 = R2;
  c.S2 = S2;
  c.b1 = b1;
  c.b2 = b2;
  c.c1 = c1;
  c.c2 = c2;
  return c;
}

// Independent high-precision evaluation of LHS - RHS of the size
// inequality, with round-to-nearest and the superfactorial summed directly.
double main_gap(unsigned long p, unsigned long K, unsigned long L, unsigned long R, unsigned long S, unsigned long b1,
                unsigned long b2, unsigned long a1, unsigned long a2) {
  const mpfr_prec_t prec = 512;
  mpfr_t t, acc, sf, u;
  mpfr_inits2(prec, t, acc, sf, u, (mpfr_ptr)0);
  auto lg = [&](mpfr_t out, unsigned long v) {
    mpfr_set_ui(out, v, MPFR_RNDN);
    mpfr_log(out, out, MPFR_RNDN);
  };
  mpfr_set_ui(sf, 0, MPFR_RNDN);
  for (unsigned long k = 2; k < K; ++k) {
    for (unsigned long j = 2; j <= k; ++j) {
      lg(u, j);
      mpfr_add(sf, sf, u, MPFR_RNDN);
    }
  }
  // log b
  mpfr_t logb;
  mpfr_init2(logb, prec);
  mpfr_set_ui(logb, (R - 1) * b2 + (S - 1) * b1, MPFR_RNDN);
  mpfr_div_ui(logb, logb, 2, MPFR_RNDN);
  mpfr_log(logb, logb, MPFR_RNDN);
  mpfr_mul_ui(u, sf, 2, MPFR_RNDN);
  mpfr_div_ui(u, u, K * K - K, MPFR_RNDN);
  mpfr_sub(logb, logb, u, MPFR_RNDN);

  lg(acc, p);
  mpfr_mul_ui(acc, acc, K * (L - 1), MPFR_RNDN);
  lg(t, K * L);
  mpfr_mul_ui(t, t, 3, MPFR_RNDN);
  mpfr_sub(acc, acc, t, MPFR_RNDN);
  mpfr_mul_ui(t, logb, K - 1, MPFR_RNDN);
  mpfr_sub(acc, acc, t, MPFR_RNDN);
  lg(t, a1);
  mpfr_mul_ui(t, t, L * (R - 1), MPFR_RNDN);
  mpfr_sub(acc, acc, t, MPFR_RNDN);
  lg(t, a2);
  mpfr_mul_ui(t, t, L * (S - 1), MPFR_RNDN);
  mpfr_sub(acc, acc, t, MPFR_RNDN);
  const double out = mpfr_get_d(acc, MPFR_RNDN);
  mpfr_clears(t, acc, sf, u, logb, (mpfr_ptr)0);
  return out;
}

}  // namespace

TEST_SUITE("bl-certificate") {
  TEST_CASE("count_alpha_products examples") {
    CHECK(count_alpha_products(grid(2, 3, 2, 2, 1, 1, 0, 0, 1, 0, 0)) == 4);
    CHECK(count_alpha_products(grid(2, 4, 3, 2, 1, 1, 0, 0, 1, 0, 0)) == 5);
    CHECK(count_alpha_products(grid(2, 3, 1, 1, 1, 1, 0, 0, 1, 0, 0)) == 1);
    CHECK(count_alpha_products(grid(2, 3, 0, 5, 1, 1, 0, 0, 1, 0, 0)) == 0);
  }

  TEST_CASE("count_linear_forms examples") {
    CHECK(count_linear_forms(grid(2, 3, 1, 1, 2, 2, 0, 0, 1, 0, 0, 1, 1)) == 3);
    CHECK(count_linear_forms(grid(2, 3, 1, 1, 2, 2, 0, 0, 1, 0, 0, 2, 3)) == 4);
    CHECK(count_linear_forms(grid(2, 3, 1, 1, 1, 1, 0, 0, 1, 0, 0, 1, 1)) == 1);
  }

  TEST_CASE("counting caps") {
    CHECK_THROWS_AS(count_alpha_products(grid(2, 3, 5000, 5000, 1, 1, 0, 0, 1, 0, 0)), CapExceeded);
    CHECK_THROWS_AS(count_linear_forms(grid(2, 3, 1, 1, 5000, 5000, 0, 0, 1, 0, 0)), CapExceeded);
  }

  TEST_CASE("counts agree with brute force") {
    std::mt19937_64 rng(20240611);
    auto pick = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
    for (int trial = 0; trial < 3000; ++trial) {
      const unsigned long a1 = pick(1, 40), a2 = pick(1, 40);
      const long R = pick(0, 9), S = pick(0, 9), g = pick(1, 8);
      const long m1 = pick(-10, 10), m2 = pick(-10, 10), c = pick(-3, 10);
      const unsigned long b1 = pick(1, 12), b2 = pick(1, 12);
      auto params = grid(a1, a2, R, S, R, S, m1, m2, g, c, c, b1, b2);
      CHECK(count_alpha_products(params) == oracle::count_alpha_products(a1, a2, R, S, m1, m2, g, c));
      CHECK(count_linear_forms(params) == oracle::count_linear_forms(b1, b2, R, S, m1, m2, g, c));
    }
  }

  TEST_CASE("independent alphas give a full grid") {
    for (long R = 1; R <= 20; R += 3)
      for (long S = 1; S <= 20; S += 4) {
        CHECK(count_alpha_products(grid(2, 3, R, S, 1, 1, 0, 0, 1, 0, 0)) == static_cast<std::uint64_t>(R * S));
        CHECK(count_alpha_products(grid(6, 10, R, S, 1, 1, 0, 0, 1, 0, 0)) == static_cast<std::uint64_t>(R * S));
      }
    // 12 and 18 share support {2, 3} but are independent there.
    CHECK(count_alpha_products(grid(12, 18, 7, 7, 1, 1, 0, 0, 1, 0, 0)) == 49);
    // 8 = 2^3, 32 = 2^5: heavy collisions.
    CHECK(count_alpha_products(grid(8, 32, 9, 9, 1, 1, 0, 0, 1, 0, 0)) ==
          oracle::count_alpha_products(8, 32, 9, 9, 0, 0, 1, 0));
  }

  TEST_CASE("log superfactorial") {
    CHECK(log_superfactorial(2).contains(0.0));
    CHECK(near(log_superfactorial(3), std::log(2.0)));
    CHECK(near(log_superfactorial(4), std::log(12.0)));
    CHECK(log_superfactorial(4).width() < 1e-30);
    CHECK_THROWS_AS(log_superfactorial(1), DomainError);
  }

  TEST_CASE("superfactorial expansion encloses the exact sum") {
    for (unsigned long K : {10ul, 50ul, 200ul, 1000ul, 2000ul, 3001ul}) {
      const Interval exact = log_superfactorial(K);
      const Interval asym = log_superfactorial_asymptotic(K);
      INFO("K = " << K);
      CHECK(greater(exact, asym) != Truth::Holds);
      CHECK(less_equal(exact, asym) != Truth::Fails);
      // Intersection is nonempty, and the expansion is sharp to ~1/K^4.
      CHECK(asym.width() < 3.0 / (double(K) * K * K * K));
    }
    // Across the crossover: log SF(n+1) = log SF(n) + log n!, with log n!
    // from MPFR's lngamma.
    const unsigned long n = kSuperfactorialCrossover;
    mpfr_t lg;
    mpfr_init2(lg, 256);
    mpfr_set_ui(lg, n + 1, MPFR_RNDN);
    mpfr_lngamma(lg, lg, MPFR_RNDN);
    const double step = mpfr_get_d(lg, MPFR_RNDN);
    mpfr_clear(lg);
    const Interval below = log_superfactorial(n);
    const Interval above = log_superfactorial(n + 1);
    CHECK(std::fabs((above - below).mid() - step) < 1e-6);
  }

  TEST_CASE("log b") {
    CHECK(near(log_b(2, 2, 1, 1, 3), -std::log(2.0) / 3));
    CHECK(std::fabs(log_b(2, 2, 1, 1, 3).mid() + 0.231049) < 1e-6);
    CHECK_THROWS_AS(log_b(1, 1, 7, 9, 3), DegenerateB);
    CHECK(std::fabs(log_b(3, 1, 5, 2, 3).mid() - 0.462098) < 1e-6);
    CHECK(near(log_b(3, 1, 5, 2, 3), 2 * std::log(2.0) / 3));
  }

  TEST_CASE("main inequality") {
    CHECK(main_inequality(5, 3, 2, 2, 2, 1, 1, 2, 3) == Truth::Fails);
    CHECK(std::fabs(main_gap(5, 3, 2, 2, 2, 1, 1, 2, 3) - (3 * std::log(5.0) - 8.497)) < 1e-3);
    CHECK(main_inequality(Natural("1000000000000000000000000000057"), 3, 2, 2, 2, 1, 1, 2, 3) == Truth::Holds);
    CHECK_THROWS_AS(main_inequality(5, 3, 2, 1, 1, 1, 1, 2, 3), DegenerateB);
  }

  TEST_CASE("main inequality is monotone in p") {
    const auto primes = primes_in_range(3, 5000);
    bool held = false;
    for (auto p : primes) {
      Truth t = main_inequality(p, 4, 3, 5, 5, 2, 3, 2, 3);
      if (held) CHECK(t == Truth::Holds);
      held = held || t == Truth::Holds;
    }
    CHECK(held);
  }

  TEST_CASE("directed rounding never certifies a false inequality") {
    std::mt19937_64 rng(7);
    auto pick = [&](unsigned long lo, unsigned long hi) {
      return std::uniform_int_distribution<unsigned long>(lo, hi)(rng);
    };
    const auto primes = primes_in_range(3, 100000);
    int disagreements = 0;
    for (int i = 0; i < 1000; ++i) {
      const unsigned long p = primes[pick(0, primes.size() - 1)];
      const unsigned long K = pick(3, 12), L = pick(2, 6), R = pick(1, 12), S = pick(2, 12);
      const unsigned long b1 = pick(1, 50), b2 = pick(1, 50), a1 = pick(2, 60), a2 = pick(2, 60);
      const Truth t = main_inequality(p, K, L, R, S, b1, b2, a1, a2);
      const double gap = main_gap(p, K, L, R, S, b1, b2, a1, a2);
      if (t == Truth::Holds && !(gap > 0)) ++disagreements;
      if (t == Truth::Fails && !(gap <= 0)) ++disagreements;
    }
    CHECK(disagreements == 0);
  }

  TEST_CASE("verify_certificate") {
    // The p = 5 instance: the size inequality fails.
    auto c = make_certificate_params(5, 2, 3, 3, 2, 2, 1, 2, 1, 1, 1, 0, 0);
    CHECK(c.g == 4);
    CHECK(c.m1 == 1);
    CHECK(c.m2 == 3);
    auto v = verify_certificate(c);
    CHECK_FALSE(v.certified);
    REQUIRE(v.outcomes.size() == 3);
    CHECK(v.outcomes[2].outcome == Truth::Fails);
    CHECK(std::find(v.failing.begin(), v.failing.end(), Condition::MainInequality) != v.failing.end());
    CHECK(v.bound == 5);

    // Bad hypotheses are rejected before any counting.
    auto bad = c;
    bad.m1 = 2;
    CHECK_THROWS_AS(verify_certificate(bad), DomainError);
    bad = c;
    bad.g = 3;
    CHECK_THROWS_AS(verify_certificate(bad), DomainError);
    bad = c;
    bad.K = 2;
    CHECK_THROWS_AS(verify_certificate(bad), DomainError);
    bad = c;
    bad.b1 = 5;
    bad.b2 = 10;
    CHECK_THROWS_AS(verify_certificate(bad), DomainError);
  }

  TEST_CASE("a certified instance at desk scale") {
    // 2 has order 16 mod 257 and both discrete logs are 0 mod 16, so the
    // residue conditions are vacuous and the size inequality decides.
    auto c = make_certificate_params(257, 2, 4, 3, 4, 2, 8, 2, 1, 256, 256, 0, 0);
    CHECK(c.g == 16);
    auto v = verify_certificate(c);
    CHECK(v.alpha_products == 4);
    CHECK(v.linear_forms == 8);
    REQUIRE(v.certified);
    CHECK(v.bound == 11);
    CHECK(main_gap(257, 3, 4, 9, 2, 256, 256, 2, 4) > 1.1);
    const Natural diff = pow(Natural(2), 256) * (pow(Natural(2), 256) - 1);
    CHECK(Natural(vp(diff, 257).exponent) <= v.bound);

    // One more linear form is needed than eight consecutive sums supply.
    auto short_forms = make_certificate_params(257, 2, 4, 3, 4, 2, 7, 2, 1, 256, 256, 0, 0);
    auto sv = verify_certificate(short_forms);
    CHECK_FALSE(sv.certified);
    REQUIRE(sv.failing.size() == 1);
    CHECK(sv.failing[0] == Condition::LinearForms);

    // Doubling R2 inflates R until the size inequality fails.
    auto big = make_certificate_params(257, 2, 4, 3, 4, 2, 16, 2, 1, 256, 256, 0, 0);
    auto bv = verify_certificate(big);
    CHECK(bv.outcomes[2].outcome == Truth::Fails);
  }

  TEST_CASE("certificate JSON round trip") {
    auto c = make_certificate_params(5, 2, 3, 3, 2, 2, 1, 2, 1, 1, 1, 0, 0);
    auto v = verify_certificate(c);
    auto j = certificate_to_json(c, v);
    const std::vector<std::string> keys = {"p",  "alpha1", "alpha2", "m1", "m2", "g",  "K",  "L",
                                           "R1", "R2",     "S1",     "S2", "b1", "b2", "c1", "c2"};
    std::size_t i = 0;
    for (auto it = j.begin(); i < keys.size(); ++it, ++i) CHECK(it.key() == keys[i]);
    CHECK(j["p"] == "5");
    CHECK(j["verdict"] == "NotCertified");
    CHECK(j["bound"].is_null());
    CHECK(j["main_inequality"] == "fails");
    auto back = certificate_from_json(nlohmann::json::parse(j.dump()));
    CHECK(certificate_to_json(back) == certificate_to_json(c));
    auto numeric = nlohmann::json::parse(R"({"p":5,"alpha1":2,"alpha2":3,"m1":1,"m2":3,"g":4,"K":3,"L":2,
      "R1":2,"R2":1,"S1":2,"S2":1,"b1":1,"b2":1,"c1":0,"c2":0})");
    CHECK(certificate_to_json(certificate_from_json(numeric)) == certificate_to_json(c));
    CHECK_THROWS_AS(certificate_from_json(nlohmann::json::parse(R"({"p":"5"})")), DomainError);
    // Integers beyond 64 bits survive as strings.
    auto big = c;
    big.p = Natural("340282366920938463463374607431768211507");
    CHECK(certificate_from_json(nlohmann::json::parse(certificate_to_json(big).dump())).p == big.p);
  }

  TEST_CASE("lemma bounds examples") {
    LemmaInstance in;
    in.K = 2;
    in.L = 2;
    in.R = 2;
    in.S = 2;
    in.g = 1;
    in.m1 = 1;
    in.m2 = 0;
    in.c = 0;
    in.pairs = {{0, 0}, {1, 1}, {0, 1}, {1, 0}};
    auto b = lemma10_bounds(in);
    CHECK(b.sum_lr == 1);
    CHECK(b.M1 == 1);
    CHECK(b.G1 == 2);
    CHECK(b.within);

    in.pairs = {{0, 0}, {0, 1}, {0, 1}, {0, 0}};
    b = lemma10_bounds(in);
    CHECK(b.sum_lr == 0);
    CHECK(b.M1 == 0);
    CHECK(b.within);

    // r constant: the weighted sum equals M1 exactly.
    in.K = 3;
    in.L = 3;
    in.R = 4;
    in.pairs.assign(9, {3, 1});
    b = lemma10_bounds(in);
    CHECK(mpq_class(b.sum_lr) == b.M1);

    // G2 uses S, not R.
    in.R = 6;
    in.S = 2;
    in.pairs.assign(9, {5, 1});
    b = lemma10_bounds(in);
    CHECK(b.G2 == mpq_class(9 * 3 * 1, 4));
    CHECK(b.G1 == mpq_class(9 * 3 * 5, 4));

    in.pairs.pop_back();
    CHECK_THROWS_AS(lemma10_bounds(in), DomainError);
    in.pairs.push_back({6, 0});
    CHECK_THROWS_AS(lemma10_bounds(in), DomainError);
    in.pairs.back() = {1, 0};
    in.g = 2;
    in.m1 = 1;
    in.m2 = 0;
    in.c = 0;
    CHECK_THROWS_AS(lemma10_bounds(in), DomainError);  // r = 5 is odd, class needs even r
  }

  TEST_CASE("lemma JSON round trip") {
    LemmaInstance in;
    in.K = 1;
    in.L = 2;
    in.R = 3;
    in.S = 3;
    in.g = 2;
    in.m1 = 1;
    in.m2 = 1;
    in.c = 0;
    in.pairs = {{1, 1}, {2, 0}};
    auto j = lemma_to_json(in);
    auto back = lemma_from_json(nlohmann::json::parse(j.dump()));
    CHECK(lemma_to_json(back) == j);
  }

  TEST_CASE("parameter selection") {
    auto sel = select_parameters(RealValue::decimal("11.32"), RealValue::decimal("3"), RealValue::decimal("1.027"),
                                 1000, RealValue::integer(1), RealValue::integer(1));
    CHECK(sel.L == 5);
    CHECK(sel.K == 56601);
    CHECK(sel.N == 283005);
    CHECK(sel.R == sel.R1 + sel.R2 - 1);
    CHECK(sel.R1 == 71);  // floor(sqrt(5000)) + 1
    CHECK(sel.R2 == 16823);  // floor(sqrt(1000 * 56600 * 5)) + 1

    auto edge = select_parameters(RealValue::decimal("1"), RealValue::decimal("2"), RealValue::decimal("1"), 1,
                                  RealValue::integer(1), RealValue::integer(1));
    CHECK(edge.L == 4);
    CHECK(edge.K == 5);  // floor(1 * 1 * 4) + 1, an exact integer product

    // Irrational a_i go through certified interval floors.
    auto irr = select_parameters(RealValue::decimal("11.32"), RealValue::decimal("3"), RealValue::decimal("1.027"), 7,
                                 RealValue::log_ratio(2, 1000003), RealValue::log_ratio(3, 1000003));
    const double a1 = std::log(2.0) / std::log(1000003.0), a2 = std::log(3.0) / std::log(1000003.0);
    CHECK(irr.K == static_cast<unsigned long>(std::floor(11.32 * 7 * 5 * a1 * a2)) + 1);

    CHECK_THROWS_AS(select_parameters(RealValue::decimal("0"), RealValue::decimal("3"), RealValue::decimal("1"), 1,
                                      RealValue::integer(1), RealValue::integer(1)),
                    DomainError);
  }

  TEST_CASE("kl condition") {
    Natural p = pow(Natural(2), 283);
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    auto k = RealValue::decimal("11.32"), l = RealValue::decimal("3"), B = RealValue::decimal("1.027");
    auto one = RealValue::integer(1);
    CHECK(check_kl_condition(k, l, B, 1000000, one, one, p) == Truth::Holds);
    CHECK(check_kl_condition(k, l, B, 1000000000, one, one, p) == Truth::Holds);
    CHECK(check_kl_condition(k, l, B, Natural("1000000000000000000000000"), one, one, p) == Truth::Holds);
    CHECK(check_kl_condition(RealValue::decimal("1e-9"), l, B, 1000000, one, one, p) == Truth::Fails);
    // At g a1 a2 = 10^3 the T2 term alone exceeds the slack LHS - T1.
    CHECK(check_kl_condition(k, l, B, 1000, one, one, p) == Truth::Fails);
  }

  TEST_CASE("log b upper bound") {
    auto one = RealValue::integer(1), two = RealValue::integer(2);
    auto zero = RealValue::integer(0);
    auto v = log_b_upper_bound(4, one, one, RealValue::decimal("11.32"), zero);
    CHECK(std::fabs(v.mid() - (std::log(4.0) + 1.5 - 0.5 * std::log(11.32))) < 1e-12);
    CHECK(std::fabs(v.mid() - 1.674) < 1e-3);
    auto w = log_b_upper_bound(4, one, one, RealValue::decimal("11.32"), RealValue::decimal(kDefaultEpsK), 256);
    auto d = w - log_b_upper_bound(4, one, one, RealValue::decimal("11.32"), zero, 256);
    CHECK(near(d, 1e-30));
    CHECK(std::fabs(log_b_upper_bound(1, two, two, one, zero).mid() - (1.5 - std::log(2.0))) < 1e-12);
  }

  TEST_CASE("residual order fallback") {
    auto one = RealValue::integer(1);
    auto f = residual_order_fallback(7, 2, 1, one, one, 5);
    CHECK(f.g0 == 3);
    CHECK(std::fabs(f.order_bound.mid() - 3 * std::log(2.0) / std::log(7.0)) < 1e-12);
    auto h = residual_order_fallback(3, 4, 1, one, one, 5);
    CHECK(h.g0 == 1);
    CHECK(std::fabs(h.order_bound.mid() - std::log(4.0) / std::log(3.0)) < 1e-12);
    auto q1 = residual_order_fallback(11, 23, 1, one, one, 5);
    CHECK(q1.g0 == 1);
    CHECK_THROWS_AS(residual_order_fallback(7, 14, 1, one, one, 5), DomainError);
  }
}
