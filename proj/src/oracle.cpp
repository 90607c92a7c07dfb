#include "asym/oracle.hpp"

#include "asym/strategies.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <future>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace asym {

long DiscreteGameSpec::budget_units() const {
  const Rational b = budget * grid;
  return static_cast<long>(mpz_class(b.get_num() / b.get_den()).get_si());
}

double DiscreteGameSpec::state_space() const {
  const double pairs = static_cast<double>(grid + 1) * static_cast<double>(grid + 2) / 2;
  const double b = static_cast<double>(budget_units());
  const double alice = (b + 1) * (b + 2) * (b + 3) * (b + 4) / 24;
  return pairs * pairs * pairs * alice * rounds;
}

void DiscreteGameSpec::check() const {
  if (grid < 1 || grid > 63) throw std::invalid_argument("grid denominator must lie in [1, 63]");
  if (rounds < 1 || rounds > 7) throw std::invalid_argument("rounds must lie in [1, 7]");
  if (budget < 0 || budget > 1) throw std::invalid_argument("budget must lie in [0, 1]");
  if (state_space() > static_cast<double>(max_states))
    throw std::invalid_argument("state space " + std::to_string(static_cast<unsigned long long>(state_space())) +
                                " exceeds the bound " + std::to_string(max_states));
}

namespace {

long product(const BobValues& q, int leaf) {
  return q[leaf < 2 ? 0 : 1] * q[2 + leaf];
}

class Solver {
 public:
  explicit Solver(const DiscreteGameSpec& spec) : n_(spec.grid), budget_(spec.budget_units()) {}

  std::uint64_t states() const { return states_; }

  long answer_value(const BobValues& q, int leaf) const { return (product(q, leaf) + n_ - 1) / n_; }

  // Bob can move so that no leaf is affordable.
  bool immediate(const AliceValues& p, long spent, const BobValues& q, BobValues* witness) const {
    const long rem = budget_ - spent;
    auto lowest = [&](long factor, long leaf_value, long floor_value) -> long {
      // Smallest v >= floor_value with factor * v > n (leaf_value + rem).
      if (factor == 0) return n_ + 1;
      return std::max(floor_value, n_ * (leaf_value + rem) / factor + 1);
    };
    for (long a = q[0]; a <= n_ - q[1]; ++a) {
      const long b = n_ - a;
      const long r = lowest(a, p[0], q[2]);
      const long s = lowest(a, p[1], q[3]);
      if (r + s > n_) continue;
      const long u = lowest(b, p[2], q[4]);
      const long v = lowest(b, p[3], q[5]);
      if (u + v > n_) continue;
      if (witness) *witness = {a, b, r, n_ - r, u, n_ - u};
      return true;
    }
    return false;
  }

  // Calls f on every forcing move in a fixed order until it returns true.
  bool forcing_moves(const AliceValues& p, const BobValues& q, const std::function<bool(const BobValues&)>& f) const {
    auto lowest = [&](long factor, long leaf_value, long floor_value) {
      return std::max(floor_value, n_ * leaf_value / factor + 1);
    };
    BobValues m;
    for (m[0] = std::max(q[0], 1L); m[0] <= n_ - q[1]; ++m[0])
      for (m[1] = std::max(q[1], 1L); m[1] <= n_ - m[0]; ++m[1])
        for (m[2] = lowest(m[0], p[0], q[2]); m[2] <= n_ - q[3]; ++m[2])
          for (m[3] = lowest(m[0], p[1], q[3]); m[3] <= n_ - m[2]; ++m[3])
            for (m[4] = lowest(m[1], p[2], q[4]); m[4] <= n_ - q[5]; ++m[4])
              for (m[5] = lowest(m[1], p[3], q[5]); m[5] <= n_ - m[4]; ++m[5])
                if (f(m)) return true;
    return false;
  }

  // Every affordable answer to move m still loses for Alice.
  bool move_wins(const AliceValues& p, long spent, const BobValues& m, int k) {
    for (int leaf = 0; leaf < 4; ++leaf) {
      const long cost = answer_value(m, leaf) - p[leaf];
      if (spent + cost > budget_) continue;
      AliceValues next = p;
      next[leaf] += cost;
      if (!bob_wins(next, spent + cost, m, k - 1)) return false;
    }
    return true;
  }

  bool bob_wins(const AliceValues& p, long spent, const BobValues& q, int k) {
    if (k == 0) return false;
    ++states_;
    if (immediate(p, spent, q, nullptr)) return true;
    if (k == 1) return false;
    const std::uint64_t key = pack(p, q, k);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const bool win = forcing_moves(p, q, [&](const BobValues& m) { return move_wins(p, spent, m, k); });
    memo_.emplace(key, win);
    return win;
  }

 private:
  static std::uint64_t pack(const AliceValues& p, const BobValues& q, int k) {
    std::uint64_t key = static_cast<std::uint64_t>(k);
    for (long v : p) key = (key << 6) | static_cast<std::uint64_t>(v);
    for (long v : q) key = (key << 6) | static_cast<std::uint64_t>(v);
    return key;
  }

  long n_;
  long budget_;
  std::uint64_t states_ = 0;
  std::unordered_map<std::uint64_t, bool> memo_;
};

BitString leaf_bits(int leaf) { return BitString::from_index(static_cast<std::size_t>(leaf), 2); }

std::vector<Move> bob_moves(const BobValues& before, const BobValues& after, long n) {
  static const char* nodes[] = {"0", "1", "00", "01", "10", "11"};
  std::vector<Move> out;
  for (int i = 0; i < 6; ++i)
    if (after[i] > before[i]) out.push_back(Move{Player::Bob, i < 2 ? 0 : 1, BitString(nodes[i]), make_rational(after[i], n)});
  return out;
}

}  // namespace

GameTranscript replay_line(const DiscreteGameSpec& spec, const std::vector<OracleStep>& line) {
  std::vector<std::vector<Move>> alice{{}};
  std::vector<std::vector<Move>> bob;
  BobValues q{};
  for (const auto& s : line) {
    bob.push_back(bob_moves(q, s.bob, spec.grid));
    q = s.bob;
    if (s.alice_leaf >= 0)
      alice.push_back({Move{Player::Alice, -1, leaf_bits(s.alice_leaf), make_rational(s.alice_value, spec.grid)}});
    else
      alice.push_back({});
  }
  GameConfig config;
  config.alice_budget = spec.budget;
  config.max_steps = static_cast<long>(2 * line.size() + 2);
  ScriptedStrategy a("oracle-alice", std::move(alice));
  ScriptedStrategy b("oracle-bob", std::move(bob));
  return run_game(a, b, config);
}

SolveResult solve_game(const DiscreteGameSpec& spec) {
  spec.check();
  SolveResult out;
  out.spec = spec;
  const AliceValues p0{};
  const BobValues q0{};

  std::vector<BobValues> first;
  {
    Solver s(spec);
    s.forcing_moves(p0, q0, [&](const BobValues& m) {
      first.push_back(m);
      return false;
    });
  }

  // Workers scan first moves; only the smallest winning index matters.
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best{first.size()};
  std::atomic<std::uint64_t> states{0};
  unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::future<void>> workers;
  for (unsigned t = 0; t < threads; ++t)
    workers.push_back(std::async(std::launch::async, [&] {
      Solver s(spec);
      for (std::size_t i = next++; i < first.size(); i = next++) {
        if (i > best.load()) break;
        if (s.move_wins(p0, 0, first[i], spec.rounds)) {
          std::size_t cur = best.load();
          while (i < cur && !best.compare_exchange_weak(cur, i)) {
          }
        }
      }
      states += s.states();
    }));
  for (auto& w : workers) w.get();
  out.states = states.load();
  out.winner = best.load() < first.size() ? Player::Bob : Player::Alice;

  // Principal line, replayed sequentially.
  Solver s(spec);
  AliceValues p = p0;
  BobValues q = q0;
  long spent = 0;
  for (int k = spec.rounds; k > 0; --k) {
    OracleStep step;
    bool have = false;
    if (out.winner == Player::Bob) {
      BobValues w;
      if (s.immediate(p, spent, q, &w)) {
        step.bob = w;
        out.line.push_back(step);
        break;
      }
      if (k == spec.rounds) {
        step.bob = first[best.load()];
        have = true;
      } else {
        have = s.forcing_moves(p, q, [&](const BobValues& m) {
          if (!s.move_wins(p, spent, m, k)) return false;
          step.bob = m;
          return true;
        });
      }
    } else {
      have = s.forcing_moves(p, q, [&](const BobValues& m) {
        step.bob = m;
        return true;
      });
    }
    if (!have) break;
    for (int leaf = 0; leaf < 4; ++leaf) {
      const long value = s.answer_value(step.bob, leaf);
      const long cost = value - p[leaf];
      if (spent + cost > spec.budget_units()) continue;
      AliceValues nextp = p;
      nextp[leaf] = value;
      const bool keeps = !s.bob_wins(nextp, spent + cost, step.bob, k - 1);
      if (out.winner == Player::Alice ? keeps : true) {
        step.alice_leaf = leaf;
        step.alice_value = value;
        break;
      }
    }
    out.line.push_back(step);
    if (step.alice_leaf < 0) break;
    spent += step.alice_value - p[step.alice_leaf];
    p[step.alice_leaf] = step.alice_value;
    q = step.bob;
  }

  out.replay = replay_line(spec, out.line);
  const Verdict expect = out.winner == Player::Bob ? Verdict::BobWinning : Verdict::AliceWinning;
  out.replay_agrees = !out.replay.fault && !out.replay.verdicts.empty() && out.replay.verdicts.back().verdict == expect;
  return out;
}

std::string shipped_name(ShippedAlice a) { return a == ShippedAlice::ThreeQuarters ? "alice-3-4" : "alice-2-3"; }

namespace {

struct Branch {
  std::string name;
  std::function<bool(const BobValues&)> allowed;
  AliceValues p36;  // Alice's final leaves in units of 1/36
  // Bob's turns leading to this branch from the final values.
  std::function<std::vector<BobValues>(const BobValues&)> order;
};

std::vector<Branch> branches_for(ShippedAlice a, long n) {
  const long n2 = n * n;
  auto at_once = [](const BobValues& b) { return std::vector<BobValues>{b}; };
  if (a == ShippedAlice::ThreeQuarters) {
    return {
        {"none", [n](const BobValues& b) { return 2 * b[0] <= n && 2 * b[2] <= n; }, {9, 0, 0, 0}, at_once},
        {"O", [n](const BobValues& b) { return 2 * b[0] > n; }, {9, 0, 0, 18},
         [](const BobValues& b) { return std::vector<BobValues>{{b[0], b[1], 0, 0, 0, 0}, b}; }},
        {"E", [n](const BobValues& b) { return 2 * b[2] > n; }, {9, 18, 0, 0},
         [](const BobValues& b) { return std::vector<BobValues>{{0, 0, b[2], b[3], b[4], b[5]}, b}; }},
    };
  }
  return {
      {"i-a", [n2](const BobValues& b) { return 9 * b[0] * b[2] <= n2; }, {4, 0, 4, 0}, at_once},
      {"i-b", [n2](const BobValues& b) { return 9 * b[1] * b[4] <= n2; }, {4, 0, 4, 0}, at_once},
      {"ii",
       [n2](const BobValues& b) { return 9 * b[0] * b[2] > n2 && 9 * std::min(b[0], b[1]) * b[4] > n2; },
       {4, 0, 4, 16},
       [](const BobValues& b) {
         return std::vector<BobValues>{{b[0], std::min(b[0], b[1]), b[2], 0, b[4], 0}, b};
       }},
      {"iii",
       [n2](const BobValues& b) { return 9 * std::min(b[0], b[1] - 1) * b[2] > n2 && 9 * b[1] * b[4] > n2; },
       {4, 16, 4, 0},
       [](const BobValues& b) {
         return std::vector<BobValues>{{std::min(b[0], b[1] - 1), b[1], b[2], 0, b[4], 0}, b};
       }},
  };
}

}  // namespace

BestResponseResult best_response(ShippedAlice strategy, long grid) {
  if (grid < 1 || grid > 1000) throw std::invalid_argument("grid denominator must lie in [1, 1000]");
  BestResponseResult out;
  out.strategy = strategy;
  out.grid = grid;
  const long n = grid;
  bool have_best = false;
  for (const Branch& br : branches_for(strategy, n)) {
    BobResponse resp;
    resp.branch = br.name;
    long best_margin = 0;
    BobValues b;
    for (b[0] = 0; b[0] <= n; ++b[0])
      for (b[1] = 0; b[1] <= n - b[0]; ++b[1])
        for (b[2] = 0; b[2] <= n; ++b[2])
          for (b[4] = 0; b[4] <= n; ++b[4]) {
            b[3] = n - b[2];
            b[5] = n - b[4];
            if (!br.allowed(b)) continue;
            long m = 0;
            for (int leaf = 0; leaf < 4; ++leaf) {
              // Margin in units of 1/(36 n^2).
              const long v = 36 * product(b, leaf) - n * n * br.p36[leaf];
              if (leaf == 0 || v < m) m = v;
            }
            if (!resp.feasible || m > best_margin) {
              resp.feasible = true;
              best_margin = m;
              resp.bob = b;
            }
          }
    if (!resp.feasible) {
      out.branches.push_back(resp);
      continue;
    }
    resp.margin = make_rational(best_margin, 36 * n * n);
    for (int leaf = 0; leaf < 4; ++leaf)
      if (br.p36[leaf]) resp.alice.set(leaf_bits(leaf), make_rational(br.p36[leaf], 36));

    // Drive the real strategy into this branch and let the referee judge.
    std::vector<std::vector<Move>> turns;
    BobValues prev{};
    for (const BobValues& stage : br.order(resp.bob)) {
      BobValues capped = stage;
      for (int i = 0; i < 6; ++i) capped[i] = std::max(capped[i], prev[i]);
      turns.push_back(bob_moves(prev, capped, n));
      prev = capped;
    }
    GameConfig config;
    config.max_steps = 8;
    if (strategy == ShippedAlice::TwoThirds) config.alice_budget = make_rational(2, 3);
    auto alice = strategy == ShippedAlice::ThreeQuarters ? alice_34() : alice_23();
    ScriptedStrategy bob("best-response", std::move(turns));
    resp.replay = run_game(*alice, bob, config);
    const bool bob_won = !resp.replay.fault && !resp.replay.verdicts.empty() &&
                         resp.replay.verdicts.back().verdict == Verdict::BobWinning;
    bool alice_matches = !resp.replay.fault;
    if (alice_matches) {
      GameState st(config);
      for (const Turn& t : resp.replay.turns) st.apply(t.player, t.moves, t.step);
      for (int leaf = 0; leaf < 4; ++leaf)
        alice_matches = alice_matches && st.alice().get(leaf_bits(leaf)) == resp.alice.get(leaf_bits(leaf));
    }
    resp.replay_agrees = alice_matches && bob_won == (resp.margin > 0);
    if (!have_best || resp.margin > out.best.margin) {
      out.best = resp;
      have_best = true;
    }
    out.branches.push_back(resp);
  }
  out.bob_beats = have_best && out.best.margin > 0;
  return out;
}

namespace {

Json bob_json(const BobValues& b, long n) {
  static const char* names[] = {"odd:0", "odd:1", "even:00", "even:01", "even:10", "even:11"};
  Json j;
  for (int i = 0; i < 6; ++i) j[names[i]] = to_string(make_rational(b[i], n));
  return j;
}

}  // namespace

Json solve_json(const SolveResult& r) {
  Json j;
  j["grid"] = "1/" + std::to_string(r.spec.grid);
  j["budget"] = to_string(r.spec.budget);
  j["rounds"] = r.spec.rounds;
  j["winner"] = player_name(r.winner);
  j["winner_note"] = "winner under discretization";
  j["state_space_bound"] = static_cast<unsigned long long>(r.spec.state_space());
  j["states_visited"] = r.states;
  Json line = Json::array();
  for (const auto& s : r.line) {
    Json x;
    x["bob"] = bob_json(s.bob, r.spec.grid);
    if (s.alice_leaf >= 0) {
      x["alice"] = {{"leaf", leaf_bits(s.alice_leaf).str()}, {"value", to_string(make_rational(s.alice_value, r.spec.grid))}};
    } else {
      x["alice"] = nullptr;
    }
    line.push_back(x);
  }
  j["line"] = line;
  j["replay_agrees"] = r.replay_agrees;
  return j;
}

Json best_response_json(const BestResponseResult& r) {
  Json j;
  j["strategy"] = shipped_name(r.strategy);
  j["grid"] = "1/" + std::to_string(r.grid);
  Json list = Json::array();
  for (const auto& b : r.branches) {
    Json x;
    x["branch"] = b.branch;
    x["feasible"] = b.feasible;
    if (b.feasible) {
      x["bob"] = bob_json(b.bob, r.grid);
      x["margin"] = to_string(b.margin);
      x["replay_agrees"] = b.replay_agrees;
    }
    list.push_back(x);
  }
  j["branches"] = list;
  j["best_branch"] = r.best.branch;
  j["best_margin"] = to_string(r.best.margin);
  j["bob_beats"] = r.bob_beats;
  return j;
}

}  // namespace asym
