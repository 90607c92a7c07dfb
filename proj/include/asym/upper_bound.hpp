#pragma once

#include "asym/interval.hpp"
#include "asym/json_io.hpp"
#include "asym/semimeasure.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace Eigen {

template <>
struct NumTraits<asym::Interval> : GenericNumTraits<asym::Interval> {
  using Real = asym::Interval;
  using NonInteger = asym::Interval;
  using Literal = asym::Interval;
  using Nested = asym::Interval;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 8,
    MulCost = 16
  };
};

}  // namespace Eigen

namespace asym {

using IVector = Eigen::Matrix<Interval, Eigen::Dynamic, 1>;

}  // namespace asym

namespace asym {

namespace detail {

template <typename T>
T larger(const T& a, const T& b) {
  return a < b ? b : a;
}
inline Interval larger(const Interval& a, const Interval& b) { return max(a, b); }

inline void require_power_of_two(std::size_t n) {
  if (!is_power_of_two(n)) throw std::invalid_argument("dimension " + std::to_string(n) + " is not a power of two");
}

template <typename Derived>
typename Derived::Scalar fold_norm(const Eigen::MatrixBase<Derived>& u, Eigen::Index begin, Eigen::Index len,
                                   bool max_on_top) {
  using Scalar = typename Derived::Scalar;
  if (len == 1) return Scalar(u(begin));
  const Eigen::Index h = len / 2;
  const Scalar a = fold_norm(u, begin, h, !max_on_top);
  const Scalar b = fold_norm(u, begin + h, h, !max_on_top);
  return max_on_top ? larger(a, b) : Scalar(a + b);
}

}  // namespace detail

/// Max over the halves of their io-norms.
template <typename Derived>
typename Derived::Scalar norm_oi(const Eigen::MatrixBase<Derived>& u) {
  detail::require_power_of_two(static_cast<std::size_t>(u.size()));
  return detail::fold_norm(u, 0, u.size(), true);
}

/// Sum over the halves of their oi-norms.
template <typename Derived>
typename Derived::Scalar norm_io(const Eigen::MatrixBase<Derived>& u) {
  detail::require_power_of_two(static_cast<std::size_t>(u.size()));
  return detail::fold_norm(u, 0, u.size(), false);
}

/// Euclidean norm of a vector given by its squared coordinates.
Interval l2_from_squares(const std::vector<Rational>& squares);

struct UpperBoundParams {
  Rational epsilon;

  explicit UpperBoundParams(Rational eps);
  /// 1/sqrt(2) + eps/2
  Interval alpha() const;
  /// sqrt(20 eps)
  Interval balance_threshold() const;
  /// -log2(alpha)
  Interval beta() const;
  /// b^2 >= 20 eps a^2 and a^2 >= 20 eps b^2, decided exactly on squares.
  bool balanced(const Rational& a2, const Rational& b2) const;
};

/// The two-coordinate step. `w_o` and `w_p` are the inner vectors the rule
/// scales (at the bottom level both equal v itself).
struct PairStep {
  IVector o;
  IVector p;
  bool balanced = false;
};

PairStep combine_pair(const UpperBoundParams& params, const Rational& a2, const Rational& b2, const IVector& w_o,
                      const IVector& w_p, const IVector& o_old, const IVector& p_old);

/// Stateful two-dimensional operator: feed squared coordinates stage by stage.
class PairOperator {
 public:
  explicit PairOperator(Rational epsilon);
  PairStep update(const Rational& a2, const Rational& b2);

 private:
  UpperBoundParams params_;
  IVector o_old_;
  IVector p_old_;
};

/// Raises leaf `index` of P_n to `mass`; u is the coordinatewise square root.
struct LeafUpdate {
  std::size_t index = 0;
  Rational mass;
};

/// Recursive o(u), p(u) with per-node old values, replayed over a history.
class OpTree {
 public:
  OpTree(std::size_t dim, Rational epsilon);

  /// Applies one stage and returns the balanced/unbalanced flags of every
  /// internal node, top-down and left to right.
  std::string update(const LeafUpdate& step);

  std::size_t dim() const { return leaves_.size(); }
  const std::vector<Rational>& masses() const { return leaves_; }
  const IVector& o() const { return nodes_.front().o; }
  const IVector& p() const { return nodes_.front().p; }

  struct Node {
    std::size_t begin = 0;
    std::size_t len = 1;
    IVector o;
    IVector p;
  };
  const std::vector<Node>& nodes() const { return nodes_; }
  const UpperBoundParams& params() const { return params_; }

 private:
  void recompute(std::size_t node, std::string& log);

  UpperBoundParams params_;
  std::vector<Rational> leaves_;
  // Heap layout: children of i are 2i+1 and 2i+2.
  std::vector<Node> nodes_;
};

/// Monotone history with total mass at most one: each step raises a random
/// leaf by a random multiple of 1/(8 dim). Deterministic in the seed.
std::vector<LeafUpdate> random_history(std::size_t dim, std::size_t updates, std::uint64_t seed);

struct ConditionCheck {
  std::size_t stage = 0;
  std::size_t begin = 0;
  std::size_t len = 0;
  std::string condition;
  Certainty result = Certainty::Unknown;
  std::string lhs;
  std::string rhs;
};

/// Certifies the three conditions at every internal node of the tree.
std::vector<ConditionCheck> certify_conditions(const OpTree& tree, std::size_t stage);

struct UpperBoundReport {
  Rational epsilon;
  std::size_t dim = 0;
  std::size_t stages = 0;
  mpfr_prec_t precision = 0;
  bool certified = false;
  bool monotone = true;
  std::vector<std::string> stage_log;
  std::vector<ConditionCheck> failures;
  std::size_t checks_run = 0;

  std::vector<Rational> o_upper;
  std::vector<Rational> p_upper;
  LeafFold p_odd;
  LeafFold p_even;
  bool assembled_valid = false;
  bool product_bound = false;
  /// The product bound holds with this factor to spare against alpha^n P_n / 4.
  Rational reported_slack = 4;
};

/// Replays a monotone history of P_n (each prefix must keep total mass at most
/// one), certifying after every stage. Inconclusive comparisons double the
/// precision and rerun the whole history.
UpperBoundReport verify_upper_bound(std::size_t dim, const Rational& epsilon, const std::vector<LeafUpdate>& history,
                                    mpfr_prec_t precision = kDefaultPrecision);

Json upper_bound_json(const UpperBoundReport& r);

}  // namespace asym
