#pragma once

#include "asym/game.hpp"
#include "asym/json_io.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace asym {

/// Discretized 2-bit game. Bob's six values (Q_odd at 0, 1 and Q_ev at
/// 00, 01, 10, 11) and Alice's four leaves are multiples of 1/grid.
///
/// Solved in a reduced form: Alice passes while some leaf has P >= product,
/// Bob only plays moves after which every leaf has product > P, and Alice
/// answers by raising one leaf to the smallest grid value covering its
/// product. Bob wins when an answer is unaffordable within `rounds` moves.
struct DiscreteGameSpec {
  long grid = 4;
  Rational budget = make_rational(3, 4);
  int rounds = 3;
  std::uint64_t max_states = 2'000'000'000;
  unsigned threads = 0;

  long budget_units() const;
  /// Reachable state count bound used for the size check.
  double state_space() const;
  void check() const;
};

/// Bob's values in grid units: p, q at 0, 1 and r, s, u, v at 00, 01, 10, 11.
using BobValues = std::array<long, 6>;
/// Alice's leaves 00, 01, 10, 11 in grid units.
using AliceValues = std::array<long, 4>;

struct OracleStep {
  BobValues bob{};
  int alice_leaf = -1;  // -1 when Alice cannot answer
  long alice_value = 0;
};

struct SolveResult {
  DiscreteGameSpec spec;
  Player winner = Player::Alice;
  std::vector<OracleStep> line;
  std::uint64_t states = 0;
  GameTranscript replay;
  bool replay_agrees = false;
};

/// Throws std::invalid_argument when the state space exceeds the bound.
SolveResult solve_game(const DiscreteGameSpec& spec);

/// The solver's line as scripted turns, played through the referee.
GameTranscript replay_line(const DiscreteGameSpec& spec, const std::vector<OracleStep>& line);

enum class ShippedAlice { ThreeQuarters, TwoThirds };
std::string shipped_name(ShippedAlice a);

struct BobResponse {
  std::string branch;
  BobValues bob{};
  MassAssignment alice;
  /// min over leaves of product - P; Bob beats Alice when positive.
  Rational margin;
  bool feasible = false;
  GameTranscript replay;
  bool replay_agrees = false;
};

struct BestResponseResult {
  ShippedAlice strategy = ShippedAlice::ThreeQuarters;
  long grid = 0;
  std::vector<BobResponse> branches;
  BobResponse best;
  bool bob_beats = false;
};

/// Bob's best final assignment against each event order of the shipped
/// strategy, maximizing the smallest leaf margin.
BestResponseResult best_response(ShippedAlice strategy, long grid);

Json solve_json(const SolveResult& r);
Json best_response_json(const BestResponseResult& r);

}  // namespace asym
