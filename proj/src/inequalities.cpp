#include "asym/inequalities.hpp"

#include <stdexcept>

namespace asym {

bool cauchy_check(const Rational& p, const Rational& q, const Rational& u, const Rational& v) {
  if (p < 0 || q < 0 || u < 0 || v < 0) throw std::invalid_argument("inputs must be nonnegative");
  // Expanding both sides leaves pv + qu >= 2 sqrt(pquv).
  const Rational a = p * v + q * u;
  return a * a >= 4 * p * q * u * v;
}

Interval lp_norm(const std::vector<Rational>& x, const Rational& s) {
  if (s <= 0) throw std::invalid_argument("norm exponent must be positive");
  Interval sum(0);
  for (const auto& v : x) sum += power_interval(abs(v), s);
  return pow(sum, Interval(1 / s));
}

HolderResult holder_check(const std::vector<std::vector<Rational>>& vectors, const std::vector<Rational>& s,
                          const Rational& r) {
  if (vectors.empty() || vectors.size() != s.size()) throw std::invalid_argument("need one exponent per vector");
  if (r <= 0) throw std::invalid_argument("r must be positive");
  Rational inv(0);
  for (const auto& e : s) {
    if (e <= 0) throw std::invalid_argument("exponents must be positive");
    inv += 1 / e;
  }
  if (inv != 1 / r) throw std::invalid_argument("exponents violate sum 1/s_i = 1/r");
  const std::size_t n = vectors.front().size();
  for (const auto& v : vectors)
    if (v.size() != n) throw std::invalid_argument("vectors differ in length");

  std::vector<Rational> prod(n, Rational(1));
  for (const auto& v : vectors)
    for (std::size_t i = 0; i < n; ++i) prod[i] *= v[i];

  HolderResult out;
  for (mpfr_prec_t bits = Interval::precision(); bits <= 4096; bits *= 2) {
    PrecisionScope scope(bits);
    out.lhs = lp_norm(prod, r);
    out.rhs = Interval(1);
    for (std::size_t k = 0; k < vectors.size(); ++k) out.rhs *= lp_norm(vectors[k], s[k]);
    out.certainty = certify_le(out.lhs, out.rhs);
    if (out.certainty != Certainty::Unknown) break;
  }
  out.holds = out.certainty != Certainty::Fails;
  return out;
}

}  // namespace asym
