#include "asym/upper_bound.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

using namespace asym;
using asym::testing::RVector;
using asym::testing::Rng;
using asym::testing::rvec;

namespace {

RVector random_vector(Rng& rng, std::size_t n) {
  std::vector<Rational> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(rng.grid(8));
  return rvec(v);
}

IVector ivec(std::initializer_list<long> xs) {
  IVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (long x : xs) v(i++) = Interval(x);
  return v;
}

bool encloses(const Interval& x, const Rational& r) { return x.lower() <= r && r <= x.upper(); }

}  // namespace

TEST_CASE("mixed norm examples") {
  const RVector a = rvec({Rational(3), Rational(4)});
  CHECK(norm_oi(a) == 4);
  CHECK(norm_io(a) == 7);
  const RVector b = rvec({Rational(1), Rational(0), Rational(0), Rational(1)});
  CHECK(norm_io(b) == 2);
  CHECK(norm_oi(b) == 1);
  CHECK_THROWS_AS(norm_oi(rvec({Rational(1), Rational(2), Rational(3)})), std::invalid_argument);
}

TEST_CASE("mixed norms equal the minimal online fold roots") {
  Rng rng(79);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = std::size_t{1} << rng.below(5);
    const RVector u = random_vector(rng, n);
    const std::vector<Rational> leaves(u.data(), u.data() + u.size());
    CHECK(norm_oi(u) == min_online_from_leaves(leaves, OnlineConstraint::even()).root());
    CHECK(norm_io(u) == min_online_from_leaves(leaves, OnlineConstraint::odd()).root());
  }
}

TEST_CASE("mixed norms are homogeneous and subadditive on nonnegative vectors") {
  Rng rng(83);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t n = std::size_t{1} << rng.below(5);
    const RVector u = random_vector(rng, n), v = random_vector(rng, n);
    const Rational c = make_rational(rng.range(0, 20), rng.range(1, 7));
    const RVector cu = u * c;
    CHECK(norm_oi(cu) == c * norm_oi(u));
    CHECK(norm_io(cu) == c * norm_io(u));
    const RVector w = u + v;
    CHECK(norm_oi(w) <= norm_oi(u) + norm_oi(v));
    CHECK(norm_io(w) <= norm_io(u) + norm_io(v));
  }
}

TEST_CASE("interval norms enclose the exact ones") {
  Rng rng(89);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = std::size_t{1} << rng.below(5);
    const RVector u = random_vector(rng, n);
    IVector iu(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) iu(i) = Interval(u(i));
    CHECK(encloses(norm_oi(iu), norm_oi(u)));
    CHECK(encloses(norm_io(iu), norm_io(u)));
  }
}

TEST_CASE("l2 from squares") {
  CHECK(encloses(l2_from_squares({Rational(9), Rational(16)}), Rational(5)));
  CHECK(encloses(l2_from_squares({}), Rational(0)));
}

TEST_CASE("balance and pair combination") {
  const UpperBoundParams z(Rational(0));
  CHECK(z.balanced(Rational(1), Rational(0)));
  CHECK(z.balanced(Rational(0), Rational(0)));
  const UpperBoundParams e(make_rational(1, 20));
  CHECK(e.balanced(Rational(1), Rational(1)));
  CHECK_FALSE(e.balanced(Rational(1), make_rational(1, 2)));
  CHECK_FALSE(e.balanced(Rational(1), Rational(1) / 20));
  const UpperBoundParams small(make_rational(1, 200));
  CHECK(small.balanced(Rational(1), make_rational(1, 10)));
  CHECK_FALSE(small.balanced(Rational(1), make_rational(1, 11)));
  CHECK(encloses(e.balance_threshold(), Rational(1)));
  CHECK_THROWS(UpperBoundParams(Rational(-1)));

  const auto s = combine_pair(z, Rational(1), Rational(1), ivec({1}), ivec({2}), ivec({0}), ivec({0}));
  CHECK(s.balanced);
  CHECK(encloses(s.o(0), Rational(2)));
  CHECK(s.p(0).lower() * s.p(0).lower() <= make_rational(1, 2));
  CHECK(s.p(0).upper() * s.p(0).upper() >= make_rational(1, 2));

  const UpperBoundParams tenth(make_rational(1, 10));
  const auto u = combine_pair(tenth, Rational(1), Rational(0), ivec({2}), ivec({5}), ivec({7}), ivec({0}));
  CHECK_FALSE(u.balanced);
  CHECK(encloses(u.o(0), Rational(7)));
  const Rational pscaled = make_rational(12, 10) * 2;
  CHECK(u.p(0).lower() * u.p(0).lower() * 2 <= pscaled * pscaled);
  CHECK(u.p(0).upper() * u.p(0).upper() * 2 >= pscaled * pscaled);
}

TEST_CASE("random histories are monotone and sub-probability") {
  for (std::size_t dim : {1u, 2u, 4u, 8u, 16u})
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto h = random_history(dim, 40, seed);
      std::vector<Rational> m(dim, Rational(0));
      for (const auto& u : h) {
        REQUIRE(u.index < dim);
        CHECK(u.mass >= m[u.index]);
        m[u.index] = u.mass;
      }
      Rational total(0);
      for (const auto& x : m) total += x;
      CHECK(total <= 1);
      CHECK(random_history(dim, 40, seed).size() == h.size());
    }
}

TEST_CASE("operator tree logs one status per internal node") {
  OpTree t(4, make_rational(5, 1024));
  CHECK(t.nodes().size() == 7);
  const std::string log = t.update(LeafUpdate{2, make_rational(1, 4)});
  CHECK(log.size() == 3);
  CHECK(log.find_first_not_of("BU") == std::string::npos);
  CHECK(t.masses()[2] == make_rational(1, 4));
  CHECK_THROWS(OpTree(3, make_rational(1, 100)));
}

TEST_CASE("upper bound certifies at a small epsilon") {
  const Rational eps = make_rational(5, 1024);
  for (std::size_t dim : {1u, 2u, 4u, 8u})
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto r = verify_upper_bound(dim, eps, random_history(dim, 30, seed));
      CHECK(r.monotone);
      CHECK(r.certified);
      CHECK(r.assembled_valid);
      CHECK(r.product_bound);
      CHECK(r.p_odd.root() <= 1);
      CHECK(r.p_even.root() <= 1);
      CHECK(r.failures.empty());
    }
}

TEST_CASE("upper bound rejects bad inputs and large epsilon") {
  CHECK_THROWS(verify_upper_bound(2, make_rational(5, 1024), {{0, make_rational(1, 2)}, {0, make_rational(1, 4)}}));
  CHECK_THROWS(verify_upper_bound(2, make_rational(5, 1024), {{0, make_rational(3, 4)}, {1, make_rational(1, 2)}}));
  bool any_failed = false;
  for (std::uint64_t seed = 0; seed < 10 && !any_failed; ++seed)
    any_failed = !verify_upper_bound(16, make_rational(1, 8), random_history(16, 60, seed)).certified;
  CHECK(any_failed);
}
