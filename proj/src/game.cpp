#include "asym/game.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

namespace asym {

std::string player_name(Player p) { return p == Player::Alice ? "alice" : "bob"; }

std::size_t GameConfig::block() const {
  int k = 2;
  for (const auto& c : bob_constraints) k = std::max(k, c.modulus());
  return static_cast<std::size_t>(k);
}

void GameConfig::check() const {
  if (alice_budget < 0 || alice_budget > 1) throw std::invalid_argument("budget must lie in [0, 1]");
  if (max_steps < 1) throw std::invalid_argument("max_steps must be at least 1");
  if (depth < 1) throw std::invalid_argument("depth must be at least 1");
  if (bob_constraints.empty()) throw std::invalid_argument("Bob needs at least one assignment");
  if (leaf_bits() > 24) throw std::invalid_argument("too many leaves to referee");
}

Rational GameView::alice(const BitString& leaf) const { return state.alice().get(leaf); }

Rational GameView::bob(const OnlineConstraint& c, const BitString& node) const {
  int t = state.target_of(c);
  if (t < 0) throw std::invalid_argument("Bob has no " + c.name() + " assignment");
  return state.bob(static_cast<std::size_t>(t)).value(node);
}

Rational GameView::bob(std::size_t target, const BitString& node) const { return state.bob(target).value(node); }

std::vector<Move> ScriptedStrategy::play(const GameView&) {
  if (next_ >= turns_.size()) return {};
  return turns_[next_++];
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Undecided: return "undecided";
    case Verdict::AliceWinning: return "alice-winning";
    case Verdict::BobWinning: return "bob-winning";
  }
  return "undecided";
}

std::string event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::Odd: return "O";
    case EventKind::Even: return "E";
    case EventKind::T00: return "T00";
    case EventKind::T10: return "T10";
    case EventKind::Modular: return "E_i";
    case EventKind::Cross: return "cross";
  }
  return "cross";
}

GameState::GameState(GameConfig config) : config_(std::move(config)) {
  config_.check();
  for (const auto& c : config_.bob_constraints) {
    bob_.emplace_back(c);
    bob_.back().apply(Update{-1, BitString(), Rational(1)});
  }
}

int GameState::target_of(const OnlineConstraint& c) const {
  for (std::size_t i = 0; i < config_.bob_constraints.size(); ++i)
    if (config_.bob_constraints[i] == c) return static_cast<int>(i);
  return -1;
}

Rational GameState::alice_total() const {
  Rational s(0);
  for (const auto& [k, v] : alice_.entries()) s += v;
  return s;
}

std::optional<std::string> GameState::apply(Player player, const std::vector<Move>& moves, long step) {
  for (const Move& m : moves)
    if (m.player != player) return "move attributed to the wrong player";

  if (player == Player::Alice) {
    MassAssignment next = alice_;
    for (const Move& m : moves) {
      if (m.target != -1) return "Alice may only write her own assignment";
      if (m.node.size() != config_.leaf_bits())
        return "Alice writes leaves of length " + std::to_string(config_.leaf_bits());
      if (m.value <= next.get(m.node))
        return "value at \"" + m.node.str() + "\" does not increase";
      next.set(m.node, m.value);
    }
    Rational total(0);
    for (const auto& [k, v] : next.entries()) total += v;
    if (total > config_.alice_budget)
      return "leaf total " + to_string(total) + " exceeds budget " + to_string(config_.alice_budget);
    alice_ = std::move(next);
    return std::nullopt;
  }

  std::map<int, std::vector<Update>> batches;
  for (const Move& m : moves) {
    if (m.target < 0 || m.target >= static_cast<int>(bob_.size())) return "Bob wrote an unknown assignment";
    if (m.node.size() > config_.leaf_bits()) return "node deeper than the leaves";
    batches[m.target].push_back(Update{step, m.node, m.value});
  }
  std::vector<StreamState> next = bob_;
  for (const auto& [t, batch] : batches)
    if (auto v = next[t].apply(batch))
      return config_.bob_constraints[t].name() + " assignment at \"" + v->node.str() + "\": " + rule_name(v->rule) +
             ": " + v->detail;
  bob_ = std::move(next);
  return std::nullopt;
}

Rational GameState::product(const BitString& leaf) const {
  Rational p(1);
  for (const auto& b : bob_) p *= b.value(leaf);
  return p;
}

VerdictRecord GameState::verdict(long step) const {
  VerdictRecord best;
  best.step = step;
  const std::size_t bits = config_.leaf_bits();
  const std::size_t count = std::size_t{1} << bits;
  for (std::size_t i = 0; i < count; ++i) {
    const BitString leaf = BitString::from_index(i, bits);
    Rational slack = alice_.get(leaf) - product(leaf);
    if (i == 0 || slack > best.slack) {
      best.slack = slack;
      best.witness = leaf;
    }
  }
  best.verdict = best.slack >= 0 ? Verdict::AliceWinning : Verdict::BobWinning;
  return best;
}

GameTranscript run_game(Strategy& alice, Strategy& bob, const GameConfig& config) {
  GameState state(config);
  GameTranscript t;
  t.config = config;
  for (long step = 0; step < config.max_steps; ++step) {
    const Player who = step % 2 == 0 ? Player::Alice : Player::Bob;
    Strategy& s = who == Player::Alice ? alice : bob;
    std::vector<Move> moves = s.play(GameView{state, step});
    if (auto err = state.apply(who, moves, step)) {
      t.fault = Fault{step, who, *err};
      break;
    }
    t.turns.push_back(Turn{step, who, std::move(moves)});
    t.verdicts.push_back(state.verdict(step));
  }
  return t;
}

std::vector<VerdictRecord> replay_verdicts(const GameTranscript& t) {
  GameState state(t.config);
  std::vector<VerdictRecord> out;
  for (const Turn& turn : t.turns) {
    if (auto err = state.apply(turn.player, turn.moves, turn.step))
      throw std::runtime_error("recorded turn at step " + std::to_string(turn.step) + " rejected: " + *err);
    out.push_back(state.verdict(turn.step));
  }
  return out;
}

VerdictRecord evaluate_win(const GameTranscript& t) {
  auto v = replay_verdicts(t);
  if (v.empty()) return GameState(t.config).verdict(-1);
  return v.back();
}

std::optional<Crossing> first_crossing(const std::vector<long>& steps, std::size_t conditions,
                                       const std::function<bool(std::size_t, long)>& holds) {
  for (long s : steps)
    for (std::size_t c = 0; c < conditions; ++c)
      if (holds(c, s)) return Crossing{s, c};
  return std::nullopt;
}

std::vector<ThresholdEvent> detect_events(const GameTranscript& t, const std::vector<EventRule>& rules) {
  GameState state(t.config);
  const int odd = state.target_of(OnlineConstraint::odd());
  const int even = state.target_of(OnlineConstraint::even());
  if (odd < 0 || even < 0) throw std::invalid_argument("event rules need odd and even assignments");

  std::vector<bool> fired(rules.size(), false);
  std::vector<ThresholdEvent> out;
  for (const Turn& turn : t.turns) {
    if (auto err = state.apply(turn.player, turn.moves, turn.step))
      throw std::runtime_error("recorded turn rejected: " + *err);
    for (std::size_t r = 0; r < rules.size(); ++r) {
      if (fired[r]) continue;
      const EventRule& rule = rules[r];
      if (state.bob(odd).value(rule.node.child(0)) > rule.odd) {
        out.push_back({EventKind::Odd, 0, rule.node, turn.step});
        fired[r] = true;
      } else if (state.bob(even).value(rule.node.child(0).child(0)) > rule.even) {
        out.push_back({EventKind::Even, 0, rule.node, turn.step});
        fired[r] = true;
      }
    }
  }
  return out;
}

std::string target_name(int target, const GameConfig& config) {
  if (target < 0) return "P";
  return config.bob_constraints.at(static_cast<std::size_t>(target)).name();
}

int parse_target(const std::string& name, const GameConfig& config) {
  if (name == "P") return -1;
  const auto c = OnlineConstraint::parse(name);
  for (std::size_t i = 0; i < config.bob_constraints.size(); ++i)
    if (config.bob_constraints[i] == c) return static_cast<int>(i);
  throw std::invalid_argument("unknown target: " + name);
}

Json move_json(const Move& m, const GameConfig& config, long step) {
  Json j;
  j["type"] = "move";
  j["step"] = step;
  j["player"] = player_name(m.player);
  j["target"] = target_name(m.target, config);
  j["node"] = m.node.str();
  j["num"] = numerator_string(m.value);
  j["den"] = denominator_string(m.value);
  return j;
}

Move move_from_json(const Json& j, const GameConfig& config) {
  Move m;
  m.player = j.at("player").get<std::string>() == "alice" ? Player::Alice : Player::Bob;
  m.target = parse_target(j.at("target").get<std::string>(), config);
  m.node = BitString(j.at("node").get<std::string>());
  m.value = from_parts(j.at("num").get<std::string>(), j.at("den").get<std::string>());
  return m;
}

std::vector<EnumerationStream> bob_streams(const GameTranscript& t) {
  std::vector<EnumerationStream> out;
  for (const auto& c : t.config.bob_constraints) out.push_back(EnumerationStream{c, {Update{0, BitString(), Rational(1)}}});
  for (const Turn& turn : t.turns) {
    if (turn.player != Player::Bob) continue;
    for (const Move& m : turn.moves)
      out.at(static_cast<std::size_t>(m.target)).updates.push_back(Update{turn.step, m.node, m.value});
  }
  return out;
}

GameTranscript scripted_bob(const GameConfig& config, std::vector<std::vector<Move>> bob_turns) {
  GameConfig c = config;
  c.max_steps = std::max<long>(c.max_steps, 2 * static_cast<long>(bob_turns.size()) + 1);
  ScriptedStrategy bob("script", std::move(bob_turns));
  ScriptedStrategy alice("silent", {});
  return run_game(alice, bob, c);
}

std::vector<Json> transcript_records(const GameTranscript& t) {
  std::vector<Json> out;
  Json cfg;
  cfg["type"] = "config";
  cfg["depth"] = t.config.depth;
  cfg["budget"] = to_string(t.config.alice_budget);
  Json cs = Json::array();
  for (const auto& c : t.config.bob_constraints) cs.push_back(c.name());
  cfg["constraints"] = cs;
  cfg["max_steps"] = t.config.max_steps;
  out.push_back(cfg);

  for (std::size_t i = 0; i < t.turns.size(); ++i) {
    const Turn& turn = t.turns[i];
    if (turn.moves.empty()) {
      Json p;
      p["type"] = "pass";
      p["step"] = turn.step;
      p["player"] = player_name(turn.player);
      out.push_back(p);
    }
    for (const Move& m : turn.moves) out.push_back(move_json(m, t.config, turn.step));
    if (i < t.verdicts.size()) {
      const VerdictRecord& v = t.verdicts[i];
      Json r;
      r["type"] = "verdict";
      r["step"] = v.step;
      r["verdict"] = verdict_name(v.verdict);
      r["witness"] = v.witness.str();
      r["slack"] = to_string(v.slack);
      out.push_back(r);
    }
  }
  for (const auto& e : t.events) {
    Json r;
    r["type"] = "event";
    r["kind"] = event_kind_name(e.kind);
    r["index"] = e.index;
    r["node"] = e.node.str();
    r["step"] = e.step;
    out.push_back(r);
  }
  if (t.fault) {
    Json f;
    f["type"] = "fault";
    f["step"] = t.fault->step;
    f["player"] = player_name(t.fault->player);
    f["message"] = t.fault->message;
    out.push_back(f);
  }
  return out;
}

void write_transcript(std::ostream& out, const GameTranscript& t) { write_jsonl(out, transcript_records(t)); }

namespace {

Verdict parse_verdict(const std::string& s) {
  if (s == "alice-winning") return Verdict::AliceWinning;
  if (s == "bob-winning") return Verdict::BobWinning;
  return Verdict::Undecided;
}

EventKind parse_event_kind(const std::string& s) {
  for (EventKind k : {EventKind::Odd, EventKind::Even, EventKind::T00, EventKind::T10, EventKind::Modular})
    if (event_kind_name(k) == s) return k;
  return EventKind::Cross;
}

}  // namespace

GameTranscript read_transcript(std::istream& in) {
  GameTranscript t;
  auto records = read_jsonl(in);
  if (records.empty() || records.front().value("type", "") != "config")
    throw std::invalid_argument("transcript must start with a config record");
  const Json& cfg = records.front();
  t.config.depth = cfg.at("depth").get<std::size_t>();
  t.config.alice_budget = parse_rational(cfg.at("budget").get<std::string>());
  t.config.bob_constraints.clear();
  for (const auto& c : cfg.at("constraints")) t.config.bob_constraints.push_back(OnlineConstraint::parse(c.get<std::string>()));
  t.config.max_steps = cfg.at("max_steps").get<long>();
  t.config.check();

  for (std::size_t i = 1; i < records.size(); ++i) {
    const Json& r = records[i];
    const std::string type = r.at("type").get<std::string>();
    if (type == "move" || type == "pass") {
      const long step = r.at("step").get<long>();
      const Player who = r.at("player").get<std::string>() == "alice" ? Player::Alice : Player::Bob;
      if (t.turns.empty() || t.turns.back().step != step) t.turns.push_back(Turn{step, who, {}});
      if (type == "move") t.turns.back().moves.push_back(move_from_json(r, t.config));
    } else if (type == "verdict") {
      t.verdicts.push_back(VerdictRecord{r.at("step").get<long>(), parse_verdict(r.at("verdict").get<std::string>()),
                                         BitString(r.at("witness").get<std::string>()),
                                         parse_rational(r.at("slack").get<std::string>())});
    } else if (type == "event") {
      t.events.push_back(ThresholdEvent{parse_event_kind(r.at("kind").get<std::string>()), r.value("index", 0),
                                        BitString(r.at("node").get<std::string>()), r.at("step").get<long>()});
    } else if (type == "fault") {
      t.fault = Fault{r.at("step").get<long>(),
                      r.at("player").get<std::string>() == "alice" ? Player::Alice : Player::Bob,
                      r.at("message").get<std::string>()};
    } else {
      throw std::invalid_argument("unknown record type: " + type);
    }
  }
  return t;
}

std::vector<std::vector<Move>> read_script(std::istream& in, const GameConfig& config, Player player) {
  std::vector<std::vector<Move>> turns;
  for (const Json& r : read_jsonl(in)) {
    const std::size_t turn = r.at("turn").get<std::size_t>();
    if (turns.size() <= turn) turns.resize(turn + 1);
    Move m;
    m.player = player;
    m.target = parse_target(r.value("target", player == Player::Alice ? std::string("P") : std::string("odd")), config);
    m.node = BitString(r.at("node").get<std::string>());
    m.value = from_parts(r.at("num").get<std::string>(), r.at("den").get<std::string>());
    turns[turn].push_back(m);
  }
  return turns;
}

}  // namespace asym
