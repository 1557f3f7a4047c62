#include <cmath>
#include <sstream>

#include "doctest.h"
#include "fqval/arith.hpp"
#include "fqval/bounds.hpp"
#include "fqval/divisor.hpp"
#include "fqval/errors.hpp"
#include "oracles.hpp"

using namespace fqval;

TEST_SUITE("divisor-tools") {
  TEST_CASE("factored integers") {
    auto n = FactoredInteger::parse("2^4 * 31");
    CHECK(n.value() == 496);
    CHECK(n.sigma() == 992);
    CHECK(n.str() == "2^4 * 31");
    CHECK(FactoredInteger::parse("7*2^2").value() == 28);
    CHECK(FactoredInteger::factor(8128).str() == "2^6 * 127");
    CHECK_THROWS_AS(FactoredInteger::parse("4^2"), DomainError);
    CHECK_THROWS_AS(FactoredInteger::parse("2 * 2"), DomainError);
    CHECK_THROWS_AS(FactoredInteger::parse("2^0"), DomainError);
    CHECK_THROWS_AS(FactoredInteger::parse("2 *"), DomainError);
    for (unsigned long v = 1; v < 5000; ++v) CHECK(FactoredInteger::factor(v).sigma() == oracle::sigma(v));
  }

  TEST_CASE("abundancy") {
    auto a = abundancy(FactoredInteger::parse("2 * 3"));
    CHECK(a.n == 2);
    CHECK(a.d == 1);
    auto b = abundancy(FactoredInteger::parse("2^3"));
    CHECK(b.n == 15);
    CHECK(b.d == 8);
    auto c = abundancy(FactoredInteger::parse("2^5 * 3 * 7"));  // 672 is 3-perfect
    CHECK(c.n == 3);
    CHECK(c.d == 1);
  }

  TEST_CASE("nagell examples") {
    CHECK_THROWS_AS(nagell_check(31, 2, 1), DomainError);
    auto r = nagell_check(13, 3, 2);
    CHECK(r.lhs == 1);
    CHECK(r.rhs >= 1);
    CHECK(r.holds);
    auto s = nagell_check(5, 3, 3);
    CHECK(s.lhs == 1);
    CHECK(s.rhs == 1);
    CHECK(s.holds);
    CHECK_THROWS_AS(nagell_check(3, 3, 1), DomainError);
    CHECK_THROWS_AS(nagell_check(5, 3, 0), DomainError);
  }

  TEST_CASE("nagell fails at p = 2 for q = 7 mod 8") {
    // sigma(7) = 8 has v_2 = 3, while v_2(7 - 1) + v_2(2) = 2.
    auto r = nagell_check(2, 7, 1);
    CHECK(r.lhs == 3);
    CHECK(r.rhs == 2);
    CHECK_FALSE(r.holds);
  }

  TEST_CASE("nagell holds for odd p on a grid") {
    auto rows = nagell_scan(3, 200, 3, 60, 30, 2);
    std::size_t bad = 0;
    for (const auto& row : rows) {
      bad += !row.result.holds;
      const Natural sigma = sigma_prime_power(row.q, row.c);
      CHECK(row.result.lhs == oracle::vp(sigma, row.p));
      const Natural qp = oracle::power(row.q, row.p - 1) - 1;
      CHECK(row.result.rhs == oracle::vp(qp, row.p) + oracle::vp(row.c + 1, row.p));
    }
    CHECK(bad == 0);
    CHECK(rows.front().p == 3);
    CHECK(rows.front().q == 5);
  }

  TEST_CASE("nagell csv") {
    std::ostringstream os;
    write_nagell_csv(os, nagell_scan(5, 5, 3, 3, 2));
    CHECK(os.str() == "p,q,c,lhs,rhs\n5,3,1,0,1\n5,3,2,0,1\n");
  }

  TEST_CASE("thm3 bounds") {
    CHECK(thm3_bound(5, 2, 4) == 865);
    CHECK(thm3_bound(11, 3, 1) == 615);
    CHECK(vp(sigma_prime_power(2, 4), 5).exponent == 0);
    CHECK_THROWS_AS(thm3_bound(5, 5, 1), DomainError);
    auto b = conj_thm3_bound(11, 3, 1);
    CHECK(near(b, 2 + (std::log(3) + std::log(std::log(3)) + std::log(std::log(11))) / std::log(11)));
    auto c = conj_thm3_bound(11, 3, 10) - conj_thm3_bound(11, 3, 1);
    CHECK(c.contains(1.0));
    auto d = conj_thm3_bound(13, 3, 2);
    CHECK(near(d, 2 + (std::log(3) + std::log(std::log(3)) + std::log(std::log(13))) / std::log(13)));
  }

  TEST_CASE("sigma valuation") {
    CHECK(sigma_valuation(3, FactoredInteger::parse("2^2 * 7")) == 0);
    CHECK(sigma_valuation(2, FactoredInteger::parse("3")) == 2);
    for (unsigned long n = 1; n < 1'000'000; n += 997) {
      auto f = FactoredInteger::factor(n);
      const Natural sigma = oracle::sigma(n);
      for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 13ul})
        CHECK(sigma_valuation(p, f) == oracle::vp(sigma, p));
    }
    auto a = FactoredInteger::parse("2^3 * 5"), b = FactoredInteger::parse("3^4 * 7");
    auto ab = FactoredInteger::parse("2^3 * 3^4 * 5 * 7");
    for (unsigned long p : {2ul, 3ul, 5ul, 11ul})
      CHECK(sigma_valuation(p, ab) == sigma_valuation(p, a) + sigma_valuation(p, b));
  }

  TEST_CASE("thm4 eq08") {
    auto six = FactoredInteger::parse("2 * 3");
    auto r = thm4_bound_eq08(six, abundancy(six), RealValue::integer(1));
    CHECK(std::fabs(r.rhs - std::pow(2, 2 / std::log(3)) * std::pow(3, 1 / std::log(2))) < 1e-9);
    CHECK(std::fabs(r.rhs - 17.23) < 0.01);
    CHECK(r.holds);
    auto n28 = FactoredInteger::parse("2^2 * 7");
    auto s = thm4_bound_eq08(n28, abundancy(n28), RealValue::integer(1));
    CHECK(std::fabs(s.rhs - std::pow(2, 6 / std::log(7)) * std::pow(7, 1 / std::log(2))) < 1e-9);
    CHECK(s.holds);
    CHECK_FALSE(thm4_bound_eq08(six, abundancy(six), RealValue::integer(0)).holds);
    CHECK_THROWS_AS(thm4_bound_eq08(FactoredInteger::parse("2^4"), abundancy(FactoredInteger::parse("2^4")),
                                    RealValue::integer(1)),
                    DomainError);
    Abundancy wrong{3, 1, true};
    CHECK_THROWS_AS(thm4_bound_eq08(six, wrong, RealValue::integer(1)), DomainError);
  }

  TEST_CASE("thm4 minimal constant matches the closed form") {
    for (const auto& N : load_perfect_table(default_perfect_table_path())) {
      auto a = abundancy(N);
      const double c = thm4_min_constant(N, a);
      // log N = C * Q where Q is log rhs at C = 1.
      const double q = thm4_bound_eq08(N, a, RealValue::integer(1)).log_rhs.mid();
      const double closed = std::log(N.value().get_d()) / q;
      INFO(N.str());
      CHECK(std::fabs(c - closed) < 1e-6);
      CHECK(c <= 1);
      CHECK(thm4_bound_eq08(N, a, RealValue::from_double(c)).holds);
      CHECK_FALSE(thm4_bound_eq08(N, a, RealValue::from_double(c - 2e-6)).holds);
      // A safe constant works across the table.
      CHECK(thm4_bound_eq08(N, a, RealValue::integer(283)).holds);
    }
    // Multiperfect inputs other than 2-perfect: 120 is 3-perfect, 30240 is 4-perfect.
    for (const char* text : {"2^3 * 3 * 5", "2^5 * 3^3 * 5 * 7"}) {
      auto n = FactoredInteger::parse(text);
      auto a = abundancy(n);
      CHECK(a.d == 1);
      const double c = thm4_min_constant(n, a);
      CHECK(thm4_bound_eq08(n, a, RealValue::from_double(c)).holds);
    }
  }

  TEST_CASE("thm4 eq09") {
    auto six = FactoredInteger::parse("2 * 3");
    auto r = thm4_bound_eq09(six, abundancy(six), RealValue::integer(0));
    CHECK(r.holds);
    CHECK(r.log_first.contains(4.0));
    CHECK(std::fabs(r.E.mid() - (2 * std::log(2) + 2 * std::log(3))) < 1e-12);
    CHECK(std::fabs(r.E.mid() - 3.583) < 1e-3);
    auto n28 = FactoredInteger::parse("2^2 * 7");
    CHECK(thm4_bound_eq09(n28, abundancy(n28), RealValue::integer(0)).holds);
    // e^{k^2} = e^4 covers only 6 and 28 among the even perfect numbers.
    for (const auto& N : load_perfect_table(default_perfect_table_path())) {
      auto r9 = thm4_bound_eq09(N, abundancy(N), RealValue::integer(0));
      const bool first_covers = r9.log_first.lower() > std::log(N.value().get_d());
      CHECK(first_covers == (N.value() <= 28));
    }
    CHECK_THROWS_AS(thm4_bound_eq09(FactoredInteger(), Abundancy{1, 1, true}, RealValue::integer(1)), DomainError);
  }

  TEST_CASE("primitive exponent check") {
    CHECK(primitive_exponent_check(FactoredInteger::parse("2^2 * 7")).holds);
    CHECK(primitive_exponent_check(FactoredInteger::parse("2^4 * 31")).holds);
    CHECK(primitive_exponent_check(FactoredInteger::parse("2 * 3")).holds);
    CHECK_THROWS_AS(primitive_exponent_check(FactoredInteger::parse("2^3 * 3")), DomainError);
    for (const auto& N : load_perfect_table(default_perfect_table_path())) {
      CHECK(N.sigma() == 2 * N.value());
      CHECK(primitive_exponent_check(N).holds);
    }
  }

  TEST_CASE("perfect table asset") {
    auto t = load_perfect_table(default_perfect_table_path());
    REQUIRE(t.size() == 8);
    CHECK(t.back().value() == Natural("2305843008139952128"));
    CHECK_THROWS_AS(load_perfect_table("/nonexistent/table.txt"), DomainError);
  }
}
