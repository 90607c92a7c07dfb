#pragma once

#include "asym/game.hpp"
#include "asym/interval.hpp"
#include "asym/stream.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace asym {

/// Parameters of the epsilon strategies. delta and delta^(1-epsilon) are
/// exact: two_player needs epsilon = 2/m, k_machine needs epsilon = 1/q.
struct StrategyParams {
  Rational epsilon;
  int k = 2;
  Rational delta;
  Rational delta_pow;      // delta^(1-epsilon)
  Rational beta_base;      // 1 - 2 delta
  Rational beta_exponent;  // k - k epsilon; beta = beta_base^beta_exponent

  static StrategyParams two_player(const Rational& epsilon);
  static StrategyParams k_machine(int k, const Rational& epsilon);
  Interval beta() const { return power_interval(beta_base, beta_exponent); }
};

enum class OmegaVariant { ThreeQuarters, Epsilon, Modular, TwoThirds };
std::string variant_name(OmegaVariant v);

/// Threshold t_i = scale_i * beta^power_i, kept symbolic so comparisons can
/// be exact whenever the exponent allows.
struct ThresholdState {
  std::vector<Rational> scale;
  std::vector<long> power;
  long quiet_rounds = 0;
  long event_rounds = 0;
};

struct Round {
  BitString block;
  std::optional<ThresholdEvent> event;
  ThresholdState after;
};

struct OmegaChecks {
  bool thresholds_sound = false;  // Bob's values on every omega prefix stay below the thresholds
  bool semimeasure = false;       // P passes validation
  bool inequality = false;        // the product bound on every omega prefix
  bool identity = false;          // the closed form of P on every omega prefix
  std::vector<std::string> failures;
  bool all() const { return thresholds_sound && semimeasure && inequality && identity; }
};

struct OmegaConstruction {
  OmegaVariant variant = OmegaVariant::ThreeQuarters;
  std::size_t block = 2;
  BitString omega;
  std::vector<Round> rounds;
  MassAssignment P;
  std::map<BitString, ThresholdState> visited;  // block-aligned nodes ever on a candidate omega
  std::vector<ThresholdEvent> events;           // events on the final omega
  OmegaChecks checks;
  std::optional<std::string> fault;
  // TwoThirds only: factors of P with each bit pair swapped.
  std::optional<OnlineMassAssignment> swapped_odd;
  std::optional<OnlineMassAssignment> swapped_even;
};

class UndefinedInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Holds Bob's histories and replays the event detector; the builders and
/// the decoder both run through it.
class OmegaBuilder {
 public:
  /// bobs[i] must have constraint (i+1) mod k; for k = 2 that is odd, even.
  /// Invalid streams are cut before their first bad update and the fault is
  /// reported in the construction.
  OmegaBuilder(OmegaVariant variant, std::vector<EnumerationStream> bobs,
               std::optional<StrategyParams> params = std::nullopt);

  OmegaConstruction build(std::size_t rounds) const;

  /// Recovers all but the last bit of the block after `prefix`, given that
  /// last bit. Throws UndefinedInput off the domain.
  BitString decode(const BitString& prefix, int last_bit) const;

  std::size_t block() const { return block_; }
  ThresholdState initial() const;
  /// Threshold value as an interval (a point when exact).
  Interval threshold_value(const ThresholdState& s, std::size_t i) const;
  /// Block written when machine i (0-based) fires.
  BitString event_block(std::size_t i) const;

 private:
  struct Fire {
    long step;
    std::size_t which;
  };
  std::optional<Fire> fire(const BitString& x, const ThresholdState& s) const;
  bool exceeds(const Rational& q, const ThresholdState& s, std::size_t i, const Rational& factor) const;
  ThresholdState advance(const ThresholdState& s, std::optional<std::size_t> event) const;
  Rational p_value(std::size_t j, const ThresholdState& s) const;
  void visit(const BitString& x, std::size_t j, std::size_t rounds, const ThresholdState& s, long a, long b,
             OmegaConstruction& out) const;
  OmegaConstruction build_two_thirds(std::size_t rounds) const;
  void visit_two_thirds(const BitString& x, std::size_t j, std::size_t rounds, const Rational& t, long a, long b,
                        OmegaConstruction& out) const;
  void check(OmegaConstruction& out, std::size_t rounds) const;

  OmegaVariant variant_;
  std::size_t block_;
  StrategyParams params_;
  Rational gamma_;  // event factor: 1/2 or delta^(1-epsilon)
  std::vector<StreamHistory> bobs_;
  std::optional<std::string> fault_;
};

OmegaConstruction build_omega_34(const EnumerationStream& odd, const EnumerationStream& even, std::size_t rounds);
OmegaConstruction build_omega_eps(const EnumerationStream& odd, const EnumerationStream& even, std::size_t rounds,
                                  const StrategyParams& params);
OmegaConstruction build_omega_kmod(const std::vector<EnumerationStream>& bobs, std::size_t rounds,
                                   const StrategyParams& params);
OmegaConstruction build_omega_23(const EnumerationStream& odd, const EnumerationStream& even, std::size_t rounds);

/// Swaps each aligned bit pair: x2 x1 x4 x3 ...
BitString swap_pairs(const BitString& x);

Json construction_json(const OmegaConstruction& c, const OmegaBuilder& builder);

}  // namespace asym
