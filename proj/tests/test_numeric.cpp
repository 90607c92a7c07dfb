#include "asym/epsilon_search.hpp"
#include "asym/inequalities.hpp"
#include "asym/interval.hpp"
#include "support/gen.hpp"

#include <doctest.h>

using namespace asym;
using asym::testing::Rng;

namespace {

bool encloses(const Interval& x, const Rational& r) { return x.lower() <= r && r <= x.upper(); }

Rational signed_grid(Rng& rng) { return make_rational(rng.range(-40, 40), rng.range(1, 13)); }

}  // namespace

TEST_CASE("interval arithmetic encloses exact results") {
  Rng rng(61);
  for (int t = 0; t < 2000; ++t) {
    const Rational a = signed_grid(rng), b = signed_grid(rng);
    const Interval ia(a), ib(b);
    CHECK(encloses(ia + ib, a + b));
    CHECK(encloses(ia - ib, a - b));
    CHECK(encloses(ia * ib, a * b));
    if (b != 0) CHECK(encloses(ia / ib, a / b));
    CHECK(encloses(max(ia, ib), a > b ? a : b));
    CHECK(encloses(abs(ia), abs(a)));
    const Rational s = abs(a);
    const Interval r = sqrt(Interval(s));
    CHECK(r.lower() * r.lower() <= s);
    CHECK(r.upper() * r.upper() >= s);
  }
}

TEST_CASE("interval elementary functions") {
  CHECK(encloses(log2(Interval(8)), Rational(3)));
  CHECK(encloses(exp2(Interval(make_rational(-3, 1))), make_rational(1, 8)));
  const Interval r2 = pow(Interval(2), Interval(make_rational(1, 2)));
  CHECK(r2.lower() * r2.lower() <= 2);
  CHECK(r2.upper() * r2.upper() >= 2);
  CHECK(encloses(power_interval(make_rational(2, 3), Rational(3)), make_rational(8, 27)));
  CHECK(power_interval(make_rational(1, 2), Rational(-3)).is_point());
  const Interval third(make_rational(1, 3));
  CHECK(third.width() > 0);
  CHECK(third.width() <= pow2(-250));
  const Interval h = Interval::hull(Interval(1), Interval(3));
  CHECK(h.lower() == 1);
  CHECK(h.upper() == 3);
}

TEST_CASE("certified comparisons are three valued") {
  CHECK(certify_le(Interval(1), Interval(2)) == Certainty::Holds);
  CHECK(certify_le(Interval(2), Interval(1)) == Certainty::Fails);
  CHECK(certify_le(Interval(Rational(1), Rational(3)), Interval(2)) == Certainty::Unknown);
  CHECK(certify_le(Interval(2), Interval(2)) == Certainty::Holds);
  CHECK(certify_lt(Interval(2), Interval(2)) == Certainty::Fails);
}

TEST_CASE("precision scopes nest") {
  CHECK(Interval::precision() == kDefaultPrecision);
  {
    PrecisionScope a(64);
    CHECK(Interval::precision() == 64);
    {
      PrecisionScope b(1024);
      CHECK(Interval::precision() == 1024);
    }
    CHECK(Interval::precision() == 64);
    CHECK(Interval(make_rational(1, 3)).width() > pow2(-70));
  }
  CHECK(Interval::precision() == kDefaultPrecision);
}

TEST_CASE("exact power comparisons") {
  CHECK_FALSE(rational_exceeds_power(make_rational(1, 4), make_rational(1, 2), Rational(2)));
  CHECK(rational_exceeds_power(make_rational(1, 4) + pow2(-400), make_rational(1, 2), Rational(2)));
  CHECK(rational_exceeds_power(make_rational(71, 100), make_rational(1, 2), make_rational(1, 2)));
  CHECK_FALSE(rational_exceeds_power(make_rational(70, 100), make_rational(1, 2), make_rational(1, 2)));
  CHECK_FALSE(rational_exceeds_power(make_rational(2, 3), make_rational(4, 9), make_rational(1, 2)));
  CHECK(rational_exceeds_power(make_rational(2, 3) + pow2(-300), make_rational(4, 9), make_rational(1, 2)));
  CHECK_FALSE(rational_exceeds_power(make_rational(9, 4), make_rational(4, 9), make_rational(-1, 1)));
  CHECK_FALSE(rational_exceeds_power(make_rational(3, 2), make_rational(4, 9), make_rational(-1, 2)));
}

TEST_CASE("cauchy check holds on random inputs") {
  Rng rng(67);
  for (int t = 0; t < 10000; ++t) {
    const Rational p = rng.grid(17), q = rng.grid(17), u = rng.grid(17), v = rng.grid(17);
    CHECK(cauchy_check(p, q, u, v));
    // Equality exactly when pv = qu.
    const Rational a = p * v + q * u;
    CHECK((a * a == 4 * p * q * u * v) == (p * v == q * u));
  }
  CHECK_THROWS(cauchy_check(Rational(-1), Rational(1), Rational(1), Rational(1)));
}

TEST_CASE("holder check against an exact two-vector oracle") {
  Rng rng(71);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 1 + rng.below(8);
    std::vector<Rational> x, y;
    for (std::size_t i = 0; i < n; ++i) {
      x.push_back(signed_grid(rng));
      y.push_back(signed_grid(rng));
    }
    const auto h = holder_check({x, y}, {Rational(2), Rational(2)}, Rational(1));
    Rational dot(0), xx(0), yy(0);
    for (std::size_t i = 0; i < n; ++i) {
      dot += abs(x[i] * y[i]);
      xx += x[i] * x[i];
      yy += y[i] * y[i];
    }
    CHECK(h.holds);
    CHECK(encloses(h.lhs, dot));
    CHECK(h.rhs.lower() * h.rhs.lower() <= xx * yy);
    CHECK(h.rhs.upper() * h.rhs.upper() >= xx * yy);
  }
}

TEST_CASE("holder check with three vectors") {
  Rng rng(73);
  const std::vector<Rational> s(3, Rational(3));
  for (int t = 0; t < 300; ++t) {
    std::vector<std::vector<Rational>> v(3);
    const std::size_t n = 1 + rng.below(6);
    for (auto& x : v)
      for (std::size_t i = 0; i < n; ++i) x.push_back(rng.grid(9));
    CHECK(holder_check(v, s, Rational(1)).holds);
  }
  CHECK_THROWS_AS(holder_check({{Rational(1)}, {Rational(1)}}, {Rational(2), Rational(3)}, Rational(1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(holder_check({{Rational(1)}, {Rational(1), Rational(2)}}, {Rational(2), Rational(2)}, Rational(1)),
                  std::invalid_argument);
}

TEST_CASE("lp norms") {
  const std::vector<Rational> x{Rational(3), Rational(-4)};
  CHECK(encloses(lp_norm(x, Rational(2)), Rational(5)));
  CHECK(encloses(lp_norm(x, Rational(1)), Rational(7)));
  CHECK_THROWS(lp_norm(x, Rational(0)));
}

TEST_CASE("box proofs") {
  const auto pos = prove_nonnegative([](const Interval& t) { return t * t - t + Interval(1); }, Rational(0),
                                     Rational(2), 1000);
  CHECK(pos.verdict == Certainty::Holds);
  const auto neg = prove_nonnegative([](const Interval& t) { return t - Interval(make_rational(1, 2)); }, Rational(0),
                                     Rational(1), 1000);
  CHECK(neg.verdict == Certainty::Fails);
  REQUIRE(neg.counterexample.has_value());
  CHECK(*neg.counterexample < make_rational(1, 2));
  CHECK(prove_nonnegative([](const Interval&) { return Interval(-1); }, Rational(1), Rational(0), 10).verdict ==
        Certainty::Holds);
}

TEST_CASE("epsilon checks") {
  CHECK_THROWS(check_epsilon(Rational(0)));
  CHECK(check_epsilon(make_rational(1, 2048)).certified);
  CHECK(check_epsilon(make_rational(5, 1024)).certified);
  CHECK_FALSE(check_epsilon(make_rational(1, 16)).certified);
}

TEST_CASE("epsilon search is monotone on its grid") {
  EpsilonSearchConfig c;
  c.grid_step = make_rational(1, 256);
  c.max_epsilon = make_rational(1, 32);
  c.threads = 1;
  const auto r = epsilon_search(c);
  REQUIRE_FALSE(r.grid.empty());
  bool seen_fail = false;
  for (const auto& g : r.grid) {
    if (!g.certified) seen_fail = true;
    CHECK_FALSE((seen_fail && g.certified));
  }
  CHECK(r.best.certified);
  CHECK(r.beta_below_half);
  CHECK(r.beta.upper() < make_rational(1, 2));
}
