#pragma once

#include <mpfr.h>

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "fqval/natural.hpp"

namespace fqval {

enum class Truth { Holds, Fails, Undecided };

const char* to_string(Truth t);

constexpr mpfr_prec_t kBasePrecision = 128;
constexpr mpfr_prec_t kMaxPrecision = 1 << 14;

/// Closed real interval [lo, hi] with MPFR endpoints. Every operation rounds
/// the lower endpoint down and the upper endpoint up, so the true value of
/// an expression always lies inside the interval computed for it.
class Interval {
 public:
  explicit Interval(mpfr_prec_t prec = kBasePrecision);
  Interval(const Interval& other);
  Interval(Interval&& other) noexcept;
  Interval& operator=(const Interval& other);
  Interval& operator=(Interval&& other) noexcept;
  ~Interval();

  static Interval exact(const mpz_class& v, mpfr_prec_t prec = kBasePrecision);
  static Interval exact(long v, mpfr_prec_t prec = kBasePrecision);
  static Interval rational(const mpq_class& v, mpfr_prec_t prec = kBasePrecision);
  /// Enclosure of a decimal literal such as "11.32" or "1e-30".
  static Interval decimal(std::string_view text, mpfr_prec_t prec = kBasePrecision);
  static Interval point(double v, mpfr_prec_t prec = kBasePrecision);
  static Interval euler(mpfr_prec_t prec = kBasePrecision);
  static Interval pi(mpfr_prec_t prec = kBasePrecision);

  mpfr_prec_t precision() const { return prec_; }
  double lower() const;
  double upper() const;
  double mid() const;
  /// Width hi - lo, rounded up.
  double width() const;

  bool certainly_positive() const;
  bool certainly_negative() const;
  bool contains(double v) const;
  bool is_point() const;

  /// Floor of the enclosed value when both endpoints share it.
  std::optional<mpz_class> certain_floor() const;

  std::string str(int digits = 20) const;

  Interval operator-() const;
  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  friend Interval operator/(const Interval& a, const Interval& b);
  friend Interval log(const Interval& a);
  friend Interval exp(const Interval& a);
  friend Interval sqrt(const Interval& a);
  friend Interval hull(const Interval& a, const Interval& b);
  friend Interval max(const Interval& a, const Interval& b);
  friend Truth greater(const Interval& a, const Interval& b);
  friend Truth greater_equal(const Interval& a, const Interval& b);

  mpfr_srcptr lo() const { return lo_; }
  mpfr_srcptr hi() const { return hi_; }

 private:
  mpfr_prec_t prec_;
  mpfr_t lo_;
  mpfr_t hi_;
};

/// Positive base, any exponent: exp(e * log b).
Interval pow(const Interval& base, const Interval& exponent);
Truth less_equal(const Interval& a, const Interval& b);

/// A real-valued input that can be re-evaluated at any precision, so that
/// undecided comparisons can be retried with tighter enclosures.
class RealValue {
 public:
  using Evaluator = std::function<Interval(mpfr_prec_t)>;

  RealValue(Evaluator eval, std::string text);

  static RealValue decimal(std::string_view text);
  static RealValue integer(const mpz_class& v);
  static RealValue from_double(double v);
  /// log(numerator) / log(base), the normalized height log A / log p.
  static RealValue log_ratio(const Natural& numerator, const Natural& base);

  Interval at(mpfr_prec_t prec) const { return eval_(prec); }
  const std::string& text() const { return text_; }
  /// The exact rational value when the input is a decimal, integer or double.
  const std::optional<mpq_class>& exact() const { return exact_; }

 private:
  Evaluator eval_;
  std::string text_;
  std::optional<mpq_class> exact_;
};

/// Re-runs `decide` at doubling precision until it returns a definite
/// answer or the precision cap is reached.
Truth decide_with_escalation(const std::function<Truth(mpfr_prec_t)>& decide);

/// Floor of a real computed by `eval`, escalating precision until the
/// enclosure no longer straddles an integer. Throws if unresolved.
mpz_class certain_floor(const std::function<Interval(mpfr_prec_t)>& eval);

}  // namespace fqval
