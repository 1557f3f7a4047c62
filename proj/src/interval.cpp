#include "fqval/interval.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <vector>

#include "fqval/errors.hpp"

namespace fqval {

const char* to_string(Truth t) {
  switch (t) {
    case Truth::Holds:
      return "holds";
    case Truth::Fails:
      return "fails";
    case Truth::Undecided:
      return "undecided";
  }
  return "undecided";
}

Interval::Interval(mpfr_prec_t prec) : prec_(prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Interval& other) : prec_(other.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept : Interval(other.prec_) {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

Interval& Interval::operator=(const Interval& other) {
  if (this == &other) return *this;
  prec_ = other.prec_;
  mpfr_set_prec(lo_, prec_);
  mpfr_set_prec(hi_, prec_);
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
  return *this;
}

Interval& Interval::operator=(Interval&& other) noexcept {
  std::swap(prec_, other.prec_);
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Interval Interval::exact(const mpz_class& v, mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_set_z(r.lo_, v.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(r.hi_, v.get_mpz_t(), MPFR_RNDU);
  return r;
}

Interval Interval::exact(long v, mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_set_si(r.lo_, v, MPFR_RNDD);
  mpfr_set_si(r.hi_, v, MPFR_RNDU);
  return r;
}

Interval Interval::rational(const mpq_class& v, mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_set_q(r.lo_, v.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, v.get_mpq_t(), MPFR_RNDU);
  return r;
}

Interval Interval::decimal(std::string_view text, mpfr_prec_t prec) {
  std::string s(text);
  Interval r(prec);
  char* end = nullptr;
  mpfr_strtofr(r.lo_, s.c_str(), &end, 10, MPFR_RNDD);
  if (s.empty() || end != s.c_str() + s.size()) throw DomainError("not a decimal real: '" + s + "'");
  mpfr_strtofr(r.hi_, s.c_str(), &end, 10, MPFR_RNDU);
  if (!mpfr_number_p(r.lo_) || !mpfr_number_p(r.hi_)) throw DomainError("not a finite real: '" + s + "'");
  return r;
}

Interval Interval::point(double v, mpfr_prec_t prec) {
  if (!std::isfinite(v)) throw DomainError("non-finite real input");
  Interval r(std::max<mpfr_prec_t>(prec, 53));
  mpfr_set_d(r.lo_, v, MPFR_RNDD);
  mpfr_set_d(r.hi_, v, MPFR_RNDU);
  return r;
}

Interval Interval::euler(mpfr_prec_t prec) { return exp(exact(1L, prec)); }

Interval Interval::pi(mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_const_pi(r.lo_, MPFR_RNDD);
  mpfr_const_pi(r.hi_, MPFR_RNDU);
  return r;
}

double Interval::lower() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::upper() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double Interval::mid() const {
  mpfr_t m;
  mpfr_init2(m, prec_ + 1);
  mpfr_add(m, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  double d = mpfr_get_d(m, MPFR_RNDN);
  mpfr_clear(m);
  return d;
}

double Interval::width() const {
  mpfr_t w;
  mpfr_init2(w, prec_);
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  double d = mpfr_get_d(w, MPFR_RNDU);
  mpfr_clear(w);
  return d;
}

bool Interval::certainly_positive() const { return mpfr_sgn(lo_) > 0; }
bool Interval::certainly_negative() const { return mpfr_sgn(hi_) < 0; }
bool Interval::contains(double v) const { return mpfr_cmp_d(lo_, v) <= 0 && mpfr_cmp_d(hi_, v) >= 0; }
bool Interval::is_point() const { return mpfr_equal_p(lo_, hi_) != 0; }

std::optional<mpz_class> Interval::certain_floor() const {
  mpz_class a, b;
  mpfr_get_z(a.get_mpz_t(), lo_, MPFR_RNDD);
  mpfr_get_z(b.get_mpz_t(), hi_, MPFR_RNDD);
  if (a != b) return std::nullopt;
  return a;
}

std::string Interval::str(int digits) const {
  auto fmt = [digits](mpfr_srcptr v, mpfr_rnd_t rnd) {
    std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
    mpfr_snprintf(buf.data(), buf.size(), "%.*R*g", digits, rnd, v);
    return std::string(buf.data());
  };
  if (is_point()) return fmt(lo_, MPFR_RNDN);
  return "[" + fmt(lo_, MPFR_RNDD) + ", " + fmt(hi_, MPFR_RNDU) + "]";
}

Interval Interval::operator-() const {
  Interval r(prec_);
  mpfr_neg(r.lo_, hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  return r;
}

Interval operator+(const Interval& a, const Interval& b) {
  Interval r(std::max(a.prec_, b.prec_));
  mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval operator-(const Interval& a, const Interval& b) {
  Interval r(std::max(a.prec_, b.prec_));
  mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
  return r;
}

namespace {

using BinaryOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

// Evaluates op on all endpoint combinations, keeping the smallest
// round-down and largest round-up result.
void corner_hull(mpfr_ptr lo, mpfr_ptr hi, mpfr_prec_t prec, BinaryOp op, mpfr_srcptr a_lo, mpfr_srcptr a_hi,
                 mpfr_srcptr b_lo, mpfr_srcptr b_hi) {
  std::array<mpfr_srcptr, 2> as{a_lo, a_hi};
  std::array<mpfr_srcptr, 2> bs{b_lo, b_hi};
  mpfr_t t;
  mpfr_init2(t, prec);
  bool first = true;
  for (auto x : as) {
    for (auto y : bs) {
      op(t, x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t, lo)) mpfr_set(lo, t, MPFR_RNDD);
      op(t, x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t, hi)) mpfr_set(hi, t, MPFR_RNDU);
      first = false;
    }
  }
  mpfr_clear(t);
}

}  // namespace

Interval operator*(const Interval& a, const Interval& b) {
  Interval r(std::max(a.prec_, b.prec_));
  corner_hull(r.lo_, r.hi_, r.prec_, mpfr_mul, a.lo_, a.hi_, b.lo_, b.hi_);
  return r;
}

Interval operator/(const Interval& a, const Interval& b) {
  if (mpfr_sgn(b.lo_) <= 0 && mpfr_sgn(b.hi_) >= 0) throw DomainError("interval division by an interval containing zero");
  Interval r(std::max(a.prec_, b.prec_));
  corner_hull(r.lo_, r.hi_, r.prec_, mpfr_div, a.lo_, a.hi_, b.lo_, b.hi_);
  return r;
}

Interval log(const Interval& a) {
  if (mpfr_sgn(a.lo_) <= 0) throw DomainError("log of an interval not strictly positive");
  Interval r(a.prec_);
  mpfr_log(r.lo_, a.lo_, MPFR_RNDD);
  mpfr_log(r.hi_, a.hi_, MPFR_RNDU);
  return r;
}

Interval exp(const Interval& a) {
  Interval r(a.prec_);
  mpfr_exp(r.lo_, a.lo_, MPFR_RNDD);
  mpfr_exp(r.hi_, a.hi_, MPFR_RNDU);
  return r;
}

Interval sqrt(const Interval& a) {
  if (mpfr_sgn(a.hi_) < 0) throw DomainError("sqrt of a negative interval");
  Interval r(a.prec_);
  if (mpfr_sgn(a.lo_) < 0)
    mpfr_set_zero(r.lo_, 1);
  else
    mpfr_sqrt(r.lo_, a.lo_, MPFR_RNDD);
  mpfr_sqrt(r.hi_, a.hi_, MPFR_RNDU);
  return r;
}

Interval hull(const Interval& a, const Interval& b) {
  Interval r(std::max(a.prec_, b.prec_));
  mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval max(const Interval& a, const Interval& b) {
  Interval r(std::max(a.prec_, b.prec_));
  mpfr_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Truth greater(const Interval& a, const Interval& b) {
  if (mpfr_greater_p(a.lo_, b.hi_)) return Truth::Holds;
  if (mpfr_lessequal_p(a.hi_, b.lo_)) return Truth::Fails;
  return Truth::Undecided;
}

Truth greater_equal(const Interval& a, const Interval& b) {
  if (mpfr_greaterequal_p(a.lo_, b.hi_)) return Truth::Holds;
  if (mpfr_less_p(a.hi_, b.lo_)) return Truth::Fails;
  return Truth::Undecided;
}

Truth less_equal(const Interval& a, const Interval& b) { return greater_equal(b, a); }

Interval pow(const Interval& base, const Interval& exponent) { return exp(exponent * log(base)); }

RealValue::RealValue(Evaluator eval, std::string text) : eval_(std::move(eval)), text_(std::move(text)) {}

namespace {

// [+-]digits[.digits][(e|E)[+-]digits] as an exact rational.
std::optional<mpq_class> parse_decimal_rational(const std::string& s) {
  std::size_t i = 0;
  bool negative = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) negative = s[i++] == '-';
  std::string digits;
  long scale = 0;
  bool dot = false;
  for (; i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || (s[i] == '.' && !dot)); ++i) {
    if (s[i] == '.') {
      dot = true;
    } else {
      digits += s[i];
      scale -= dot;
    }
  }
  if (digits.empty()) return std::nullopt;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    std::size_t used = 0;
    try {
      scale += std::stol(s.substr(i), &used);
    } catch (const std::exception&) {
      return std::nullopt;
    }
    i += used;
  }
  if (i != s.size() || scale > 100000 || scale < -100000) return std::nullopt;
  mpz_class m(digits), ten = 10, p;
  mpz_pow_ui(p.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(scale < 0 ? -scale : scale));
  mpq_class q = scale < 0 ? mpq_class(m, p) : mpq_class(m * p);
  q.canonicalize();
  return negative ? -q : q;
}

}  // namespace

RealValue RealValue::decimal(std::string_view text) {
  std::string s(text);
  (void)Interval::decimal(s, 53);  // validate eagerly
  RealValue r([s](mpfr_prec_t prec) { return Interval::decimal(s, prec); }, s);
  r.exact_ = parse_decimal_rational(s);
  return r;
}

RealValue RealValue::integer(const mpz_class& v) {
  RealValue r([v](mpfr_prec_t prec) { return Interval::exact(v, prec); }, v.get_str());
  r.exact_ = mpq_class(v);
  return r;
}

RealValue RealValue::from_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  RealValue r([v](mpfr_prec_t prec) { return Interval::point(v, prec); }, buf);
  if (std::isfinite(v)) r.exact_ = mpq_class(v);
  return r;
}

RealValue RealValue::log_ratio(const Natural& numerator, const Natural& base) {
  if (numerator < 1 || base < 2) throw DomainError("log_ratio: need numerator >= 1 and base >= 2");
  return RealValue(
      [numerator, base](mpfr_prec_t prec) {
        return log(Interval::exact(numerator, prec)) / log(Interval::exact(base, prec));
      },
      "log(" + numerator.get_str() + ")/log(" + base.get_str() + ")");
}

Truth decide_with_escalation(const std::function<Truth(mpfr_prec_t)>& decide) {
  for (mpfr_prec_t prec = kBasePrecision; prec <= kMaxPrecision; prec *= 2) {
    Truth t = decide(prec);
    if (t != Truth::Undecided) return t;
  }
  return Truth::Undecided;
}

mpz_class certain_floor(const std::function<Interval(mpfr_prec_t)>& eval) {
  for (mpfr_prec_t prec = kBasePrecision; prec <= kMaxPrecision; prec *= 2) {
    if (auto f = eval(prec).certain_floor()) return *f;
  }
  throw DomainError("floor could not be certified at the maximum precision");
}

}  // namespace fqval
