#include "asym/omega.hpp"
#include "support/gen.hpp"

#include <doctest.h>

using namespace asym;
using asym::testing::Rng;

namespace {

std::vector<std::string> blocks_for(std::size_t k) {
  std::vector<std::string> out{std::string(k, '0')};
  for (std::size_t i = 0; i < k; ++i) {
    std::string b(k, '0');
    b[i] = '1';
    b[k - 1] = '1';
    out.push_back(b);
  }
  out.push_back(std::string(k, '1'));
  return out;
}

std::vector<OnlineConstraint> machines(int k) {
  std::vector<OnlineConstraint> out;
  for (int i = 1; i <= k; ++i) out.push_back(OnlineConstraint::modulo(i % k == 0 ? k : i % k, k));
  return out;
}

void check_decodes(const OmegaBuilder& b, const OmegaConstruction& c) {
  const std::size_t k = b.block();
  for (std::size_t j = 0; j < c.rounds.size(); ++j) {
    const BitString prefix = c.omega.prefix(j * k);
    const BitString block = c.omega.prefix((j + 1) * k).suffix_from(j * k);
    CHECK(b.decode(prefix, block.bit(k - 1)) == block.prefix(k - 1));
  }
}

}  // namespace

TEST_CASE("strategy parameters are exact") {
  const auto p = StrategyParams::two_player(make_rational(1, 2));
  CHECK(p.delta == make_rational(1, 16));
  CHECK(p.delta_pow == make_rational(1, 4));
  CHECK(p.beta_base == make_rational(7, 8));
  CHECK(p.beta_exponent == 1);
  CHECK(p.beta().lower() == make_rational(7, 8));
  CHECK_THROWS(StrategyParams::two_player(make_rational(3, 7)));
  const auto q = StrategyParams::k_machine(3, make_rational(1, 2));
  CHECK(q.delta == make_rational(1, 36));
  CHECK(q.delta_pow == make_rational(1, 6));
  CHECK(q.beta_exponent == make_rational(3, 2));
  CHECK_THROWS(StrategyParams::k_machine(3, make_rational(2, 5)));
}

TEST_CASE("swap_pairs") {
  CHECK(swap_pairs("0111"_bits) == "1011"_bits);
  CHECK(swap_pairs(BitString()) == BitString());
  CHECK(swap_pairs(swap_pairs("100110"_bits)) == "100110"_bits);
}

TEST_CASE("silent Bob gives the quiet path") {
  EnumerationStream odd{OnlineConstraint::odd(), {}}, even{OnlineConstraint::even(), {}};
  const auto c = build_omega_34(odd, even, 4);
  CHECK(c.omega == BitString::zeros(8));
  CHECK(c.checks.all());
  CHECK(c.events.empty());
  CHECK(c.P.get(BitString::zeros(8)) > 0);
}

TEST_CASE("an odd threat is answered with 11") {
  EnumerationStream odd{OnlineConstraint::odd(), {{0, BitString(), 1}, {1, "0"_bits, make_rational(3, 4)}}};
  EnumerationStream even{OnlineConstraint::even(), {{0, BitString(), 1}}};
  const auto c = build_omega_34(odd, even, 2);
  CHECK(c.omega.prefix(2) == "11"_bits);
  REQUIRE_FALSE(c.events.empty());
  CHECK(c.events.front().kind == EventKind::Odd);
  CHECK(c.checks.all());
}

TEST_CASE("invalid Bob streams are cut and reported") {
  EnumerationStream odd{OnlineConstraint::odd(), {{0, BitString(), 1}, {1, "0"_bits, make_rational(3, 4)},
                                                   {2, "0"_bits, make_rational(1, 2)}}};
  EnumerationStream even{OnlineConstraint::even(), {}};
  const auto c = build_omega_34(odd, even, 2);
  CHECK(c.fault.has_value());
  CHECK_THROWS(OmegaBuilder(OmegaVariant::ThreeQuarters, {even, odd}));
}

TEST_CASE("3/4 construction holds against random Bobs and decodes") {
  Rng rng(41);
  int with_events = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t rounds = 1 + rng.below(6);
    const auto paths = asym::testing::block_paths(rng, blocks_for(2), rounds, 4);
    const auto s = asym::testing::random_streams(rng, {OnlineConstraint::odd(), OnlineConstraint::even()}, paths, 40);
    const OmegaBuilder b(OmegaVariant::ThreeQuarters, s);
    const auto c = b.build(rounds);
    CHECK(c.checks.all());
    CHECK(c.omega.size() == 2 * rounds);
    check_decodes(b, c);
    with_events += !c.events.empty();
  }
  CHECK(with_events > 10);
}

TEST_CASE("epsilon construction holds against random Bobs and decodes") {
  Rng rng(43);
  const auto params = StrategyParams::two_player(make_rational(1, 2));
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t rounds = 1 + rng.below(5);
    const auto paths = asym::testing::block_paths(rng, blocks_for(2), rounds, 4);
    const auto s = asym::testing::random_streams(rng, {OnlineConstraint::odd(), OnlineConstraint::even()}, paths, 40);
    const OmegaBuilder b(OmegaVariant::Epsilon, s, params);
    const auto c = b.build(rounds);
    CHECK(c.checks.all());
    check_decodes(b, c);
  }
}

TEST_CASE("k-machine construction holds against random Bobs and decodes") {
  Rng rng(47);
  for (int k = 2; k <= 4; ++k) {
    const auto params = StrategyParams::k_machine(k, make_rational(1, 2));
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t rounds = 1 + rng.below(3);
      const auto paths = asym::testing::block_paths(rng, blocks_for(k), rounds, 4);
      const auto s = asym::testing::random_streams(rng, machines(k), paths, 40);
      const OmegaBuilder b(OmegaVariant::Modular, s, params);
      const auto c = b.build(rounds);
      CHECK(c.checks.all());
      CHECK(c.block == static_cast<std::size_t>(k));
      check_decodes(b, c);
    }
  }
}

TEST_CASE("2/3 construction checks hold and its decoder is undefined") {
  Rng rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t rounds = 1 + rng.below(4);
    const auto paths = asym::testing::block_paths(rng, blocks_for(2), rounds, 4);
    const auto s = asym::testing::random_streams(rng, {OnlineConstraint::odd(), OnlineConstraint::even()}, paths, 40);
    const OmegaBuilder b(OmegaVariant::TwoThirds, s);
    const auto c = b.build(rounds);
    CHECK(c.checks.all());
    REQUIRE(c.swapped_odd.has_value());
    REQUIRE(c.swapped_even.has_value());
    CHECK(validate(*c.swapped_odd).empty());
    CHECK(validate(*c.swapped_even).empty());
    CHECK_THROWS_AS(b.decode(BitString(), 0), UndefinedInput);
  }
}

TEST_CASE("decoder rejects inputs off the domain") {
  EnumerationStream odd{OnlineConstraint::odd(), {}}, even{OnlineConstraint::even(), {}};
  const OmegaBuilder b(OmegaVariant::ThreeQuarters, {odd, even});
  CHECK(b.decode(BitString(), 0) == "0"_bits);
  CHECK_THROWS_AS(b.decode("0"_bits, 0), UndefinedInput);
  CHECK_THROWS_AS(b.decode(BitString(), 1), UndefinedInput);
}
