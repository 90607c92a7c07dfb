#include "asym/factorize.hpp"

#include <stdexcept>

namespace asym {

namespace {

Rational ratio(const Rational& num, const Rational& den) {
  return den == 0 ? Rational(0) : Rational(num / den);
}

}  // namespace

Factorization factorize_computable(const MassAssignment& p, std::size_t depth) {
  if (depth % 2 != 0) throw std::invalid_argument("factorization depth must be even");
  if (auto v = validate(p); !v.empty())
    throw std::invalid_argument("not a semimeasure at \"" + v.front().node.str() + "\": " + v.front().detail);

  Factorization f;
  f.odd.constraint = OnlineConstraint::odd();
  f.even.constraint = OnlineConstraint::even();
  const BitString root;
  f.odd.set(root, p.get(root));
  f.even.set(root, Rational(1));

  for (std::size_t d = 0; d < depth; d += 2) {
    const std::size_t count = std::size_t{1} << d;
    for (std::size_t i = 0; i < count; ++i) {
      const BitString x = BitString::from_index(i, d);
      const Rational alpha = f.even.base.get(x);
      for (int b = 0; b < 2; ++b) {
        const BitString y = x.child(b);
        const Rational& e = p.get(y);
        const Rational odd_y = ratio(e, alpha);
        f.odd.set(y, odd_y);
        f.even.set(y, alpha);
        for (int c = 0; c < 2; ++c) {
          const BitString z = y.child(c);
          f.odd.set(z, odd_y);
          f.even.set(z, alpha * ratio(p.get(z), e));
        }
      }
    }
  }
  return f;
}

}  // namespace asym
