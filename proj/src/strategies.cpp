#include "asym/strategies.hpp"

namespace asym {

namespace {

class Alice34 : public Strategy {
 public:
  std::vector<Move> play(const GameView& view) override {
    if (!opened_) {
      opened_ = true;
      return {leaf("00", make_rational(1, 4))};
    }
    if (answered_) return {};
    const Rational half = make_rational(1, 2);
    if (view.bob(OnlineConstraint::odd(), "0"_bits) > half) {
      answered_ = true;
      return {leaf("11", half)};
    }
    if (view.bob(OnlineConstraint::even(), "00"_bits) > half) {
      answered_ = true;
      return {leaf("01", half)};
    }
    return {};
  }
  std::string name() const override { return "alice_34"; }

 private:
  static Move leaf(const char* node, Rational v) { return Move{Player::Alice, -1, BitString(node), std::move(v)}; }
  bool opened_ = false;
  bool answered_ = false;
};

class Alice23 : public Strategy {
 public:
  std::vector<Move> play(const GameView& view) override {
    const Rational ninth = make_rational(1, 9);
    if (!opened_) {
      opened_ = true;
      return {leaf("00", ninth), leaf("10", ninth)};
    }
    if (answered_) return {};
    const auto odd = OnlineConstraint::odd();
    const auto even = OnlineConstraint::even();
    const Rational p = view.bob(odd, "0"_bits), q = view.bob(odd, "1"_bits);
    const Rational r = view.bob(even, "00"_bits), u = view.bob(even, "10"_bits);
    if (p * r > ninth && q * u > ninth) {
      answered_ = true;
      return {leaf(p >= q ? "11" : "01", make_rational(4, 9))};
    }
    return {};
  }
  std::string name() const override { return "alice_23"; }

 private:
  static Move leaf(const char* node, Rational v) { return Move{Player::Alice, -1, BitString(node), std::move(v)}; }
  bool opened_ = false;
  bool answered_ = false;
};

class Silent : public Strategy {
 public:
  std::vector<Move> play(const GameView&) override { return {}; }
  std::string name() const override { return "silent"; }
};

}  // namespace

std::unique_ptr<Strategy> alice_34() { return std::make_unique<Alice34>(); }
std::unique_ptr<Strategy> alice_23() { return std::make_unique<Alice23>(); }
std::unique_ptr<Strategy> silent() { return std::make_unique<Silent>(); }

MassAssignment alice_23_semimeasure(const MassAssignment& game_values) {
  MassAssignment out;
  for (const auto& [node, v] : game_values.entries()) out.set(node, v * make_rational(3, 2));
  return out;
}

}  // namespace asym
