#pragma once

#include "asym/rational.hpp"

#include <mpfr.h>

#include <string>

namespace asym {

/// Closed interval [lo, hi] with MPFR endpoints. Every operation rounds
/// outward, so the exact real result is always enclosed.
///
/// New values take the precision of the innermost PrecisionScope on the
/// calling thread (256 bits by default).
class Interval {
 public:
  Interval();
  Interval(int v);  // NOLINT: implicit so Eigen can build zeros
  Interval(long v);  // NOLINT
  explicit Interval(const Rational& r);
  Interval(const Rational& lo, const Rational& hi);
  Interval(const Interval& other);
  Interval(Interval&& other) noexcept;
  Interval& operator=(const Interval& other);
  Interval& operator=(Interval&& other) noexcept;
  ~Interval();

  static mpfr_prec_t precision();

  /// Smallest interval containing both.
  static Interval hull(const Interval& a, const Interval& b);

  Rational lower() const;
  Rational upper() const;
  double lo_double() const;
  double hi_double() const;
  bool contains_zero() const;
  bool is_point() const;
  /// Upper minus lower, rounded up.
  Rational width() const;

  /// Decimal endpoints with `digits` significant digits, rounded outward.
  std::string lo_string(int digits = 20) const;
  std::string hi_string(int digits = 20) const;

  Interval& operator+=(const Interval& b);
  Interval& operator-=(const Interval& b);
  Interval& operator*=(const Interval& b);
  Interval& operator/=(const Interval& b);

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a);
  friend Interval operator*(const Interval& a, const Interval& b);
  friend Interval operator/(const Interval& a, const Interval& b);
  friend Interval sqrt(const Interval& a);
  friend Interval log2(const Interval& a);
  friend Interval exp2(const Interval& a);
  /// a^e for a >= 0, by corner evaluation (monotone in each argument).
  friend Interval pow(const Interval& a, const Interval& e);
  friend Interval max(const Interval& a, const Interval& b);
  friend Interval min(const Interval& a, const Interval& b);
  friend Interval abs(const Interval& a);

  mpfr_srcptr lo_ptr() const { return lo_; }
  mpfr_srcptr hi_ptr() const { return hi_; }

 private:
  mpfr_t lo_;
  mpfr_t hi_;
};

/// Three-valued comparison outcome.
enum class Certainty { Holds, Fails, Unknown };
std::string certainty_name(Certainty c);

/// a <= b for every pair of points of the two intervals, or for none.
Certainty certify_le(const Interval& a, const Interval& b);
Certainty certify_lt(const Interval& a, const Interval& b);

/// Sets the working precision for the current thread until destruction.
class PrecisionScope {
 public:
  explicit PrecisionScope(mpfr_prec_t bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  mpfr_prec_t saved_;
};

inline constexpr mpfr_prec_t kDefaultPrecision = 256;
inline constexpr mpfr_prec_t kMaxPrecision = 1 << 16;

/// Decides q > base^exponent for q, base >= 0. Integer exponents are
/// compared exactly; otherwise precision doubles until the answer is
/// certain, with an exact q^b vs base^a fallback for exponent a/b when the
/// operands are small enough. Throws std::runtime_error past kMaxPrecision.
bool rational_exceeds_power(const Rational& q, const Rational& base, const Rational& exponent);

/// base^exponent as an interval. Integral exponents are computed exactly
/// and rounded once.
Interval power_interval(const Rational& base, const Rational& exponent);

/// [lo, hi] as rational strings, for reports.
std::string interval_string(const Interval& x, int digits = 20);

}  // namespace asym
