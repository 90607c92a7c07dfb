#pragma once

#include "asym/json_io.hpp"
#include "asym/stream.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace asym {

enum class Player { Alice, Bob };
std::string player_name(Player p);

struct GameConfig {
  std::size_t depth = 1;  // rounds of blocks; leaves have depth * block() bits
  Rational alice_budget = make_rational(3, 4);
  std::vector<OnlineConstraint> bob_constraints{OnlineConstraint::odd(), OnlineConstraint::even()};
  long max_steps = 16;

  std::size_t block() const;
  std::size_t leaf_bits() const { return depth * block(); }
  /// Throws std::invalid_argument when the config breaks its invariants.
  void check() const;
};

/// Alice writes her leaf assignment (target -1); Bob writes the assignment
/// of constraint number `target`.
struct Move {
  Player player = Player::Alice;
  int target = -1;
  BitString node;
  Rational value;
  bool operator==(const Move&) const = default;
};

class GameState;

/// What a strategy may look at when it is its turn.
struct GameView {
  const GameState& state;
  long step;
  Rational alice(const BitString& leaf) const;
  Rational bob(const OnlineConstraint& c, const BitString& node) const;
  Rational bob(std::size_t target, const BitString& node) const;
};

class Strategy {
 public:
  virtual ~Strategy() = default;
  /// An empty list passes.
  virtual std::vector<Move> play(const GameView& view) = 0;
  virtual std::string name() const = 0;
};

/// Replays a fixed list of turns, then passes.
class ScriptedStrategy : public Strategy {
 public:
  ScriptedStrategy(std::string name, std::vector<std::vector<Move>> turns)
      : name_(std::move(name)), turns_(std::move(turns)) {}
  std::vector<Move> play(const GameView& view) override;
  std::string name() const override { return name_; }

 private:
  std::string name_;
  std::vector<std::vector<Move>> turns_;
  std::size_t next_ = 0;
};

enum class Verdict { Undecided, AliceWinning, BobWinning };
std::string verdict_name(Verdict v);

struct VerdictRecord {
  long step = -1;
  Verdict verdict = Verdict::Undecided;
  BitString witness;  // leaf of largest P - product, first in order on ties
  Rational slack;     // P - product at the witness
  bool operator==(const VerdictRecord&) const = default;
};

struct Fault {
  long step = 0;
  Player player = Player::Alice;
  std::string message;
};

enum class EventKind { Odd, Even, T00, T10, Modular, Cross };
std::string event_kind_name(EventKind k);

struct ThresholdEvent {
  EventKind kind = EventKind::Cross;
  int index = 0;  // machine number for Modular events
  BitString node;
  long step = 0;
  bool operator==(const ThresholdEvent&) const = default;
};

/// Referee state: Alice's leaf values and Bob's online assignments. Bob's
/// roots start at 1.
class GameState {
 public:
  explicit GameState(GameConfig config);

  const GameConfig& config() const { return config_; }
  const MassAssignment& alice() const { return alice_; }
  const StreamState& bob(std::size_t target) const { return bob_[target]; }
  std::size_t bob_count() const { return bob_.size(); }
  int target_of(const OnlineConstraint& c) const;
  Rational alice_total() const;

  /// Validates the turn as a whole; nothing changes when it is rejected.
  std::optional<std::string> apply(Player player, const std::vector<Move>& moves, long step);

  /// Product of Bob's values at a leaf.
  Rational product(const BitString& leaf) const;
  VerdictRecord verdict(long step) const;

 private:
  GameConfig config_;
  MassAssignment alice_;
  std::vector<StreamState> bob_;
};

struct Turn {
  long step = 0;
  Player player = Player::Alice;
  std::vector<Move> moves;
};

struct GameTranscript {
  GameConfig config;
  std::vector<Turn> turns;
  std::vector<VerdictRecord> verdicts;  // one per accepted turn
  std::vector<ThresholdEvent> events;
  std::optional<Fault> fault;
};

/// Alice moves at even steps, Bob at odd steps, for at most max_steps steps.
GameTranscript run_game(Strategy& alice, Strategy& bob, const GameConfig& config);

/// Re-referees the recorded turns and returns the verdict after each one.
/// Throws std::runtime_error if a recorded turn is now rejected.
std::vector<VerdictRecord> replay_verdicts(const GameTranscript& t);

/// Verdict at the final state of the transcript.
VerdictRecord evaluate_win(const GameTranscript& t);

/// Threshold pair at a node of a two-machine game: the odd condition is
/// Q_odd(x0) > odd, the even condition Q_ev(x00) > even.
struct EventRule {
  BitString node;
  Rational odd;
  Rational even;
};

/// First-crossing scan: `holds(c, s)` says whether condition c holds after
/// step s. Returns the first step where any holds and the lowest such c.
struct Crossing {
  long step;
  std::size_t which;
};
std::optional<Crossing> first_crossing(const std::vector<long>& steps, std::size_t conditions,
                                       const std::function<bool(std::size_t, long)>& holds);

/// At most one event per rule. When both conditions first hold at the
/// same step the odd event fires. Sorted by step, then rule order.
std::vector<ThresholdEvent> detect_events(const GameTranscript& t, const std::vector<EventRule>& rules);

/// Bob's accepted moves as one enumeration stream per assignment, each
/// opening with the root set to 1 at step 0.
std::vector<EnumerationStream> bob_streams(const GameTranscript& t);

/// A transcript whose Bob turns come from a script and whose Alice never moves.
GameTranscript scripted_bob(const GameConfig& config, std::vector<std::vector<Move>> bob_turns);

std::vector<Json> transcript_records(const GameTranscript& t);
void write_transcript(std::ostream& out, const GameTranscript& t);
GameTranscript read_transcript(std::istream& in);

Json move_json(const Move& m, const GameConfig& config, long step);
Move move_from_json(const Json& j, const GameConfig& config);
std::string target_name(int target, const GameConfig& config);
int parse_target(const std::string& name, const GameConfig& config);

/// Bob script: JSON lines {"turn": i, "target": "odd", "node": ..., "num": ..., "den": ...}.
std::vector<std::vector<Move>> read_script(std::istream& in, const GameConfig& config, Player player);

}  // namespace asym
