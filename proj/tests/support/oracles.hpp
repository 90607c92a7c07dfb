#pragma once

#include "asym/semimeasure.hpp"

#include <Eigen/Core>

#include <vector>

namespace Eigen {

template <>
struct NumTraits<asym::Rational> : GenericNumTraits<asym::Rational> {
  using Real = asym::Rational;
  using NonInteger = asym::Rational;
  using Literal = asym::Rational;
  using Nested = asym::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 3,
    MulCost = 3
  };
};

}  // namespace Eigen

namespace asym::testing {

using RVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

inline RVector rvec(const std::vector<Rational>& v) {
  RVector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

// Leaf sets a minimal online semimeasure must cover below a node: a sum
// depth keeps both children, a copy depth keeps one of them.
inline std::vector<std::vector<std::size_t>> selections(std::size_t begin, std::size_t len, std::size_t depth,
                                                        const OnlineConstraint& c) {
  if (len == 1) return {{begin}};
  const std::size_t h = len / 2;
  auto left = selections(begin, h, depth + 1, c);
  auto right = selections(begin + h, h, depth + 1, c);
  std::vector<std::vector<std::size_t>> out;
  if (c.sum_step(depth + 1)) {
    for (const auto& a : left)
      for (const auto& b : right) {
        auto s = a;
        s.insert(s.end(), b.begin(), b.end());
        out.push_back(std::move(s));
      }
  } else {
    out = left;
    out.insert(out.end(), right.begin(), right.end());
  }
  return out;
}

// Smallest value an online semimeasure above `leaves` can have at the node
// covering [begin, begin + len) at `depth`: the largest covered sum.
inline Rational brute_min_value(const std::vector<Rational>& leaves, std::size_t begin, std::size_t len,
                                std::size_t depth, const OnlineConstraint& c) {
  Rational best(0);
  for (const auto& s : selections(begin, len, depth, c)) {
    Rational sum(0);
    for (std::size_t i : s) sum += leaves[i];
    if (sum > best) best = sum;
  }
  return best;
}

}  // namespace asym::testing
