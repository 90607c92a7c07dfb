#pragma once

#include "asym/interval.hpp"

#include <vector>

namespace asym {

/// (p+q)(u+v) >= (sqrt(pu) + sqrt(qv))^2 for nonnegative inputs, decided
/// exactly on rationals.
bool cauchy_check(const Rational& p, const Rational& q, const Rational& u, const Rational& v);

struct HolderResult {
  /// False only when a violation is certified.
  bool holds = true;
  Certainty certainty = Certainty::Unknown;
  Interval lhs;
  Interval rhs;
};

/// ||u1 * ... * uk||_r <= ||u1||_s1 ... ||uk||_sk with sum 1/s_i = 1/r.
/// Throws std::invalid_argument on a bad exponent set or mismatched sizes.
HolderResult holder_check(const std::vector<std::vector<Rational>>& vectors, const std::vector<Rational>& s,
                          const Rational& r);

/// (sum |x_i|^s)^(1/s)
Interval lp_norm(const std::vector<Rational>& x, const Rational& s);

}  // namespace asym
