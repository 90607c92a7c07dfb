#include "asym/interval.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <stdexcept>

namespace asym {

namespace {

thread_local mpfr_prec_t g_precision = kDefaultPrecision;

using Op = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

// Encloses op over the four endpoint combinations.
void corners(mpfr_ptr lo, mpfr_ptr hi, const Interval& a, const Interval& b, Op op) {
  const std::array<mpfr_srcptr, 2> xs{a.lo_ptr(), a.hi_ptr()};
  const std::array<mpfr_srcptr, 2> ys{b.lo_ptr(), b.hi_ptr()};
  mpfr_t t;
  mpfr_init2(t, g_precision);
  bool first = true;
  for (auto x : xs)
    for (auto y : ys) {
      op(t, x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t, lo)) mpfr_set(lo, t, MPFR_RNDD);
      op(t, x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t, hi)) mpfr_set(hi, t, MPFR_RNDU);
      first = false;
    }
  mpfr_clear(t);
}

Rational to_rational(mpfr_srcptr x) {
  Rational r;
  mpfr_get_q(r.get_mpq_t(), x);
  return r;
}

std::string endpoint_string(mpfr_srcptr x, int digits, mpfr_rnd_t rnd) {
  char* buf = nullptr;
  if (rnd == MPFR_RNDD)
    mpfr_asprintf(&buf, "%.*RDe", digits - 1, x);
  else
    mpfr_asprintf(&buf, "%.*RUe", digits - 1, x);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

}  // namespace

Interval::Interval() {
  mpfr_init2(lo_, g_precision);
  mpfr_init2(hi_, g_precision);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(int v) : Interval(static_cast<long>(v)) {}

Interval::Interval(long v) {
  mpfr_init2(lo_, g_precision);
  mpfr_init2(hi_, g_precision);
  mpfr_set_si(lo_, v, MPFR_RNDD);
  mpfr_set_si(hi_, v, MPFR_RNDU);
}

Interval::Interval(const Rational& r) : Interval(r, r) {}

Interval::Interval(const Rational& lo, const Rational& hi) {
  if (lo > hi) throw std::invalid_argument("interval with lo > hi");
  mpfr_init2(lo_, g_precision);
  mpfr_init2(hi_, g_precision);
  mpfr_set_q(lo_, lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, hi.get_mpq_t(), MPFR_RNDU);
}

Interval::Interval(const Interval& o) {
  mpfr_init2(lo_, mpfr_get_prec(o.lo_));
  mpfr_init2(hi_, mpfr_get_prec(o.hi_));
  mpfr_set(lo_, o.lo_, MPFR_RNDD);
  mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& o) noexcept : Interval(static_cast<const Interval&>(o)) {}

Interval& Interval::operator=(const Interval& o) {
  if (this == &o) return *this;
  mpfr_set_prec(lo_, mpfr_get_prec(o.lo_));
  mpfr_set_prec(hi_, mpfr_get_prec(o.hi_));
  mpfr_set(lo_, o.lo_, MPFR_RNDD);
  mpfr_set(hi_, o.hi_, MPFR_RNDU);
  return *this;
}

Interval& Interval::operator=(Interval&& o) noexcept {
  if (this != &o) {
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
  }
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

mpfr_prec_t Interval::precision() { return g_precision; }

Interval Interval::hull(const Interval& a, const Interval& b) {
  Interval r;
  mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Rational Interval::lower() const { return to_rational(lo_); }
Rational Interval::upper() const { return to_rational(hi_); }
double Interval::lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }
bool Interval::contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
bool Interval::is_point() const { return mpfr_equal_p(lo_, hi_); }
Rational Interval::width() const { return upper() - lower(); }
std::string Interval::lo_string(int digits) const { return endpoint_string(lo_, digits, MPFR_RNDD); }
std::string Interval::hi_string(int digits) const { return endpoint_string(hi_, digits, MPFR_RNDU); }

Interval& Interval::operator+=(const Interval& b) { return *this = *this + b; }
Interval& Interval::operator-=(const Interval& b) { return *this = *this - b; }
Interval& Interval::operator*=(const Interval& b) { return *this = *this * b; }
Interval& Interval::operator/=(const Interval& b) { return *this = *this / b; }

Interval operator+(const Interval& a, const Interval& b) {
  Interval r;
  mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval operator-(const Interval& a, const Interval& b) {
  Interval r;
  mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
  return r;
}

Interval operator-(const Interval& a) {
  Interval r;
  mpfr_neg(r.lo_, a.hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
  return r;
}

Interval operator*(const Interval& a, const Interval& b) {
  Interval r;
  corners(r.lo_, r.hi_, a, b, mpfr_mul);
  return r;
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) throw std::domain_error("interval division by an interval containing zero");
  Interval r;
  corners(r.lo_, r.hi_, a, b, mpfr_div);
  return r;
}

Interval sqrt(const Interval& a) {
  if (mpfr_sgn(a.hi_) < 0) throw std::domain_error("sqrt of a negative interval");
  Interval r;
  if (mpfr_sgn(a.lo_) <= 0)
    mpfr_set_zero(r.lo_, 1);
  else
    mpfr_sqrt(r.lo_, a.lo_, MPFR_RNDD);
  mpfr_sqrt(r.hi_, a.hi_, MPFR_RNDU);
  return r;
}

Interval log2(const Interval& a) {
  if (mpfr_sgn(a.lo_) <= 0) throw std::domain_error("log2 of a nonpositive interval");
  Interval r;
  mpfr_log2(r.lo_, a.lo_, MPFR_RNDD);
  mpfr_log2(r.hi_, a.hi_, MPFR_RNDU);
  return r;
}

Interval exp2(const Interval& a) {
  Interval r;
  mpfr_exp2(r.lo_, a.lo_, MPFR_RNDD);
  mpfr_exp2(r.hi_, a.hi_, MPFR_RNDU);
  return r;
}

Interval pow(const Interval& a, const Interval& e) {
  if (mpfr_sgn(a.lo_) < 0) throw std::domain_error("pow of a negative base");
  if (mpfr_sgn(a.lo_) == 0 && mpfr_sgn(e.lo_) <= 0) throw std::domain_error("pow of zero to a nonpositive power");
  Interval r;
  corners(r.lo_, r.hi_, a, e, mpfr_pow);
  return r;
}

Interval max(const Interval& a, const Interval& b) {
  Interval r;
  mpfr_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval min(const Interval& a, const Interval& b) {
  Interval r;
  mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_min(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval abs(const Interval& a) {
  if (mpfr_sgn(a.lo_) >= 0) return a;
  if (mpfr_sgn(a.hi_) <= 0) return -a;
  Interval r;
  mpfr_set_zero(r.lo_, 1);
  mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, a.hi_, MPFR_RNDU);
  return r;
}

std::string certainty_name(Certainty c) {
  switch (c) {
    case Certainty::Holds: return "holds";
    case Certainty::Fails: return "fails";
    case Certainty::Unknown: return "inconclusive";
  }
  return "inconclusive";
}

Certainty certify_le(const Interval& a, const Interval& b) {
  if (mpfr_lessequal_p(a.hi_ptr(), b.lo_ptr())) return Certainty::Holds;
  if (mpfr_greater_p(a.lo_ptr(), b.hi_ptr())) return Certainty::Fails;
  return Certainty::Unknown;
}

Certainty certify_lt(const Interval& a, const Interval& b) {
  if (mpfr_less_p(a.hi_ptr(), b.lo_ptr())) return Certainty::Holds;
  if (mpfr_greaterequal_p(a.lo_ptr(), b.hi_ptr())) return Certainty::Fails;
  return Certainty::Unknown;
}

PrecisionScope::PrecisionScope(mpfr_prec_t bits) : saved_(g_precision) {
  g_precision = std::clamp<mpfr_prec_t>(bits, MPFR_PREC_MIN, MPFR_PREC_MAX);
}

PrecisionScope::~PrecisionScope() { g_precision = saved_; }

Interval power_interval(const Rational& base, const Rational& exponent) {
  if (exponent.get_den() == 1) {
    const long e = exponent.get_num().get_si();
    Rational v = pow(base, static_cast<unsigned long>(e < 0 ? -e : e));
    return Interval(e < 0 ? Rational(1 / v) : v);
  }
  return pow(Interval(base), Interval(exponent));
}

namespace {

std::size_t rational_bits(const Rational& r) {
  return mpz_sizeinbase(r.get_num_mpz_t(), 2) + mpz_sizeinbase(r.get_den_mpz_t(), 2);
}

// q > base^(a/b) iff q^b > base^a, for q, base > 0. Empty when too large.
std::optional<bool> exact_exceeds(const Rational& q, const Rational& base, const Rational& exponent) {
  if (q <= 0 || base <= 0) return std::nullopt;
  if (!exponent.get_den().fits_ulong_p() || !exponent.get_num().fits_slong_p()) return std::nullopt;
  const unsigned long b = exponent.get_den().get_ui();
  const long a = exponent.get_num().get_si();
  const unsigned long ua = static_cast<unsigned long>(a < 0 ? -a : a);
  constexpr double kLimit = 1 << 24;
  if (static_cast<double>(rational_bits(q)) * static_cast<double>(b) +
          static_cast<double>(rational_bits(base)) * static_cast<double>(ua) >
      kLimit)
    return std::nullopt;
  const Rational lhs = pow(q, b);
  const Rational rhs = pow(base, ua);
  return a < 0 ? lhs * rhs > 1 : lhs > rhs;
}

}  // namespace

bool rational_exceeds_power(const Rational& q, const Rational& base, const Rational& exponent) {
  if (exponent.get_den() == 1) {
    const long e = exponent.get_num().get_si();
    Rational v = pow(base, static_cast<unsigned long>(e < 0 ? -e : e));
    return q > (e < 0 ? Rational(1 / v) : v);
  }
  for (mpfr_prec_t bits = std::max<mpfr_prec_t>(128, Interval::precision()); bits <= kMaxPrecision; bits *= 2) {
    PrecisionScope scope(bits);
    const Interval v = power_interval(base, exponent);
    const Interval qi(q);
    if (certify_lt(v, qi) == Certainty::Holds) return true;
    if (certify_le(qi, v) == Certainty::Holds) return false;
    if (auto exact = exact_exceeds(q, base, exponent)) return *exact;
  }
  throw std::runtime_error("comparison undecided at maximum precision");
}

std::string interval_string(const Interval& x, int digits) {
  return "[" + x.lo_string(digits) + ", " + x.hi_string(digits) + "]";
}

}  // namespace asym
