#include "asym/chain_rule.hpp"
#include "asym/epsilon_search.hpp"
#include "asym/factorize.hpp"
#include "asym/game.hpp"
#include "asym/omega.hpp"
#include "asym/oracle.hpp"
#include "asym/strategies.hpp"
#include "asym/upper_bound.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

using namespace asym;

namespace {

constexpr int kUsageError = 1;
constexpr int kCertificationFailure = 2;

// Raised when a check the command exists to run does not pass.
struct CertificationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  long precision = kDefaultPrecision;
  long max_steps = 16;
  std::uint64_t seed = 1;
  std::string out;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return in;
}

std::vector<Json> read_records(const std::string& path) {
  auto in = open_input(path);
  return read_jsonl(in);
}

Rational rational_arg(const std::string& text, const char* what) {
  try {
    return parse_rational(text);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("bad ") + what + ": " + text);
  }
}

// "1/N" or "N"
long grid_arg(const std::string& text) {
  const Rational g = rational_arg(text, "grid");
  if (g <= 0) throw std::invalid_argument("grid must be positive");
  const Rational n = g < 1 ? Rational(1 / g) : g;
  if (n.get_den() != 1) throw std::invalid_argument("grid must be 1/N for an integer N");
  return n.get_num().get_si();
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw std::invalid_argument("cannot write " + g.out);
  f << text;
}

void emit_json(const Globals& g, const Json& j) { emit(g, j.dump(2) + "\n"); }

Json violations_json(const std::vector<Violation>& vs) {
  Json list = Json::array();
  for (const auto& v : vs)
    list.push_back({{"rule", rule_name(v.rule)}, {"node", v.node.str()}, {"detail", v.detail}});
  return list;
}

Json assignment_json(const MassAssignment& a) {
  Json j = Json::object();
  for (const auto& [node, v] : a.entries()) j[node.str()] = to_string(v);
  return j;
}

std::unique_ptr<Strategy> make_alice(const std::string& name) {
  if (name == "alice-3-4") return alice_34();
  if (name == "alice-2-3") return alice_23();
  if (name == "silent") return silent();
  throw std::invalid_argument("unknown strategy: " + name);
}

OmegaVariant variant_arg(const std::string& name) {
  for (auto v : {OmegaVariant::ThreeQuarters, OmegaVariant::Epsilon, OmegaVariant::Modular, OmegaVariant::TwoThirds})
    if (variant_name(v) == name) return v;
  throw std::invalid_argument("unknown variant: " + name);
}

// Bob's streams from a transcript or a script file; an empty path means a silent Bob.
// Roots start at 1 as in the game.
std::vector<EnumerationStream> load_bob(const std::string& path, const GameConfig& config) {
  std::vector<EnumerationStream> out;
  for (const auto& c : config.bob_constraints) out.push_back(EnumerationStream{c, {Update{0, BitString(), Rational(1)}}});
  if (path.empty()) return out;
  auto records = read_records(path);
  if (!records.empty() && records.front().value("type", "") == "config") {
    std::stringstream ss;
    write_jsonl(ss, records);
    return bob_streams(read_transcript(ss));
  }
  std::stringstream ss;
  write_jsonl(ss, records);
  const auto turns = read_script(ss, config, Player::Bob);
  for (std::size_t t = 0; t < turns.size(); ++t)
    for (const Move& m : turns[t])
      out.at(static_cast<std::size_t>(m.target))
          .updates.push_back(Update{static_cast<long>(2 * t + 1), m.node, m.value});
  return out;
}

struct OmegaArgs {
  std::string variant = "3-4";
  std::string bob;
  std::string epsilon = "1/2";
  int k = 3;
};

OmegaBuilder make_builder(const OmegaArgs& a) {
  const OmegaVariant v = variant_arg(a.variant);
  GameConfig config;
  std::optional<StrategyParams> params;
  if (v == OmegaVariant::Epsilon) params = StrategyParams::two_player(rational_arg(a.epsilon, "epsilon"));
  if (v == OmegaVariant::Modular) {
    params = StrategyParams::k_machine(a.k, rational_arg(a.epsilon, "epsilon"));
    config.bob_constraints.clear();
    for (int i = 1; i <= a.k; ++i) config.bob_constraints.push_back(OnlineConstraint::modulo(i, a.k));
  }
  return OmegaBuilder(v, load_bob(a.bob, config), params);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online semimeasures, enumeration games and their certificates"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--precision-bits", g.precision, "Interval precision in bits")->check(CLI::Range(32L, 1L << 16));
  app.add_option("--max-steps", g.max_steps, "Step limit for games")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Seed for generated inputs");
  app.add_option("--out", g.out, "Write the result here instead of stdout");

  // run-game
  auto* run = app.add_subcommand("run-game", "Play Alice against a scripted Bob and print the transcript");
  std::string run_alice = "alice-3-4", run_bob, run_budget;
  run->add_option("--alice", run_alice, "alice-3-4, alice-2-3 or silent");
  run->add_option("--bob-script", run_bob, "JSON lines of Bob's moves");
  run->add_option("--budget", run_budget, "Alice's budget");

  // build-omega / decode-f
  OmegaArgs om;
  std::size_t rounds = 4;
  auto* build = app.add_subcommand("build-omega", "Run Alice's inductive strategy and check its invariants");
  build->add_option("--variant", om.variant, "3-4, eps, kmod or 2-3");
  build->add_option("--rounds", rounds, "Blocks of omega")->check(CLI::Range(1, 64));
  build->add_option("--bob", om.bob, "Bob transcript or script");
  build->add_option("--epsilon", om.epsilon, "epsilon for eps and kmod");
  build->add_option("--k", om.k, "machines for kmod")->check(CLI::Range(2, 16));

  auto* decode = app.add_subcommand("decode-f", "Recover the bits of a block from the prefix and the last bit");
  std::string prefix;
  int last_bit = 0;
  decode->add_option("--variant", om.variant, "3-4, eps or kmod");
  decode->add_option("--bob", om.bob, "Bob transcript or script");
  decode->add_option("--epsilon", om.epsilon, "epsilon for eps and kmod");
  decode->add_option("--k", om.k, "machines for kmod")->check(CLI::Range(2, 16));
  decode->add_option("--prefix", prefix, "Block-aligned prefix of omega");
  decode->add_option("--last-bit", last_bit, "Last bit of the next block")->check(CLI::Range(0, 1));

  // verify-upperbound
  auto* verify = app.add_subcommand("verify-upperbound", "Certify the o/p construction on a history of P_n");
  std::string ub_eps = "1/256", ub_history;
  std::size_t dim = 4, updates = 0;
  verify->add_option("--epsilon", ub_eps, "epsilon");
  verify->add_option("--dim", dim, "Vector dimension (power of two)");
  verify->add_option("--history", ub_history, "JSON lines {\"index\": i, \"mass\": \"a/b\"}");
  verify->add_option("--updates", updates, "Length of a generated history (default 4 dim)");

  // epsilon-search
  auto* search = app.add_subcommand("epsilon-search", "Find the largest certified epsilon on a grid");
  std::string step = "1/2048", max_eps = "1/16";
  unsigned threads = 0;
  std::size_t max_boxes = 200000;
  bool include_grid = false;
  search->add_option("--grid-step", step, "Grid spacing");
  search->add_option("--max-epsilon", max_eps, "Largest grid point");
  search->add_option("--threads", threads, "Worker threads (0 = hardware)");
  search->add_option("--max-boxes", max_boxes, "Bisection budget per inequality");
  search->add_flag("--include-grid", include_grid, "Report every grid point");

  // factorize
  auto* fact = app.add_subcommand("factorize", "Split a semimeasure into odd and even online factors");
  std::string fact_in;
  std::size_t fact_depth = 2;
  fact->add_option("--input", fact_in, "JSON lines {\"node\": x, \"value\": \"a/b\"}")->required();
  fact->add_option("--depth", fact_depth, "Even depth to factor to");

  // chain-combine
  auto* chain = app.add_subcommand("chain-combine", "Split a joint enumeration or combine conditionals");
  std::string direction = "forward", joint, marginal, conditionals;
  std::size_t m = 0;
  long k = 0, k_max = 64;
  chain->add_option("--direction", direction, "forward or backward");
  chain->add_option("--joint", joint, "Joint stream (forward)");
  chain->add_option("--marginal", marginal, "Marginal stream (backward)");
  chain->add_option("--conditionals", conditionals, "Conditional updates with condition and k (backward)");
  chain->add_option("--m", m, "Length of the condition");
  chain->add_option("--k", k, "Mass threshold exponent (forward)");
  chain->add_option("--k-max", k_max, "Largest k summed (backward)");

  // solve-small-game
  auto* solve = app.add_subcommand("solve-small-game", "Exhaustively solve a discretized 2-bit game");
  std::string budget = "3/4", grid = "1/4", against;
  int game_rounds = 3;
  unsigned solve_threads = 0;
  std::uint64_t max_states = 2'000'000'000;
  solve->add_option("--budget", budget, "Alice's budget");
  solve->add_option("--grid", grid, "Value grid 1/N");
  solve->add_option("--rounds", game_rounds, "Bob's moves");
  solve->add_option("--threads", solve_threads, "Worker threads (0 = hardware)");
  solve->add_option("--max-states", max_states, "State-space bound");
  solve->add_option("--against", against, "Best response to alice-3-4 or alice-2-3 instead");

  // validate
  auto* val = app.add_subcommand("validate", "Check a stream, an assignment or a transcript");
  std::string val_file, val_constraint = "plain";
  val->add_option("file", val_file, "JSON lines input")->required();
  val->add_option("--constraint", val_constraint, "Constraint when the file has no header");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    PrecisionScope scope(g.precision);

    if (*run) {
      GameConfig config;
      config.max_steps = g.max_steps;
      config.alice_budget = run_budget.empty() ? (run_alice == "alice-2-3" ? make_rational(2, 3) : make_rational(3, 4))
                                               : rational_arg(run_budget, "budget");
      config.check();
      auto alice = make_alice(run_alice);
      std::vector<std::vector<Move>> turns;
      if (!run_bob.empty()) {
        auto in = open_input(run_bob);
        turns = read_script(in, config, Player::Bob);
      }
      ScriptedStrategy bob("script", std::move(turns));
      std::stringstream ss;
      write_transcript(ss, run_game(*alice, bob, config));
      emit(g, ss.str());
      return 0;
    }

    if (*build) {
      const OmegaBuilder b = make_builder(om);
      const OmegaConstruction c = b.build(rounds);
      emit_json(g, construction_json(c, b));
      return c.checks.all() ? 0 : kCertificationFailure;
    }

    if (*decode) {
      const OmegaBuilder b = make_builder(om);
      Json j;
      j["prefix"] = prefix;
      j["last_bit"] = last_bit;
      try {
        j["bits"] = b.decode(BitString(prefix), last_bit).str();
        j["defined"] = true;
      } catch (const UndefinedInput& e) {
        j["defined"] = false;
        j["reason"] = e.what();
      }
      emit_json(g, j);
      return 0;
    }

    if (*verify) {
      std::vector<LeafUpdate> history;
      if (!ub_history.empty()) {
        for (const Json& r : read_records(ub_history))
          history.push_back({r.at("index").get<std::size_t>(), rational_from_json(r.at("mass"))});
      } else {
        history = random_history(dim, updates ? updates : 4 * dim, g.seed);
      }
      const auto report = verify_upper_bound(dim, rational_arg(ub_eps, "epsilon"), history, g.precision);
      emit_json(g, upper_bound_json(report));
      return report.certified && report.assembled_valid && report.product_bound ? 0 : kCertificationFailure;
    }

    if (*search) {
      EpsilonSearchConfig cfg;
      cfg.grid_step = rational_arg(step, "grid step");
      cfg.max_epsilon = rational_arg(max_eps, "max epsilon");
      cfg.precision = g.precision;
      cfg.threads = threads;
      cfg.max_boxes = max_boxes;
      EpsilonSearchResult r;
      try {
        r = epsilon_search(cfg);
      } catch (const std::runtime_error& e) {
        throw CertificationFailure(e.what());
      }
      emit_json(g, epsilon_search_json(r, include_grid));
      return r.beta_below_half ? 0 : kCertificationFailure;
    }

    if (*fact) {
      MassAssignment p;
      for (const Json& r : read_records(fact_in))
        p.set(BitString(r.at("node").get<std::string>()), rational_from_json(r.at("value")));
      const Factorization f = factorize_computable(p, fact_depth);
      bool identity = true;
      for (std::size_t d = 0; d <= fact_depth; d += 2)
        for (std::size_t i = 0; i < (std::size_t{1} << d); ++i) {
          const BitString x = BitString::from_index(i, d);
          if (f.odd.value(x) * f.even.value(x) != OnlineMassAssignment{p, OnlineConstraint::plain()}.value(x))
            identity = false;
        }
      Json j;
      j["depth"] = fact_depth;
      j["odd"] = assignment_json(f.odd.base);
      j["even"] = assignment_json(f.even.base);
      j["odd_violations"] = violations_json(validate(f.odd));
      j["even_violations"] = violations_json(validate(f.even));
      j["identity"] = identity;
      emit_json(g, j);
      return identity && validate(f.odd).empty() && validate(f.even).empty() ? 0 : kCertificationFailure;
    }

    if (*chain) {
      if (direction == "forward") {
        if (joint.empty()) throw std::invalid_argument("--joint is required");
        auto in = open_input(joint);
        const auto family = chain_combine_forward(read_stream(in), m, k);
        Json j;
        j["m"] = family.m;
        j["k"] = family.k;
        Json list = Json::array();
        for (const auto& [x, c] : family.by_condition) {
          Json e;
          e["condition"] = x.str();
          e["constraint"] = c.stream.constraint.name();
          e["frozen_at"] = c.frozen_at ? Json(*c.frozen_at) : Json(nullptr);
          Json ups = Json::array();
          for (const auto& u : c.stream.updates) ups.push_back(update_json(u));
          e["updates"] = ups;
          list.push_back(e);
        }
        j["conditionals"] = list;
        emit_json(g, j);
        return 0;
      }
      if (direction != "backward") throw std::invalid_argument("direction must be forward or backward");
      if (marginal.empty() || conditionals.empty())
        throw std::invalid_argument("--marginal and --conditionals are required");
      auto in = open_input(marginal);
      const EnumerationStream marg = read_stream(in);
      ConditionalStreams conds;
      for (const Json& r : read_records(conditionals)) {
        const auto key = std::make_pair(BitString(r.at("condition").get<std::string>()), r.at("k").get<long>());
        auto [it, fresh] = conds.try_emplace(key);
        if (fresh) it->second.constraint = marg.constraint.shifted(m);
        it->second.updates.push_back(update_from_json(r));
      }
      const auto res = chain_combine_backward(marg, conds, m, k_max);
      const auto bad = backward_bound_failures(marg, conds, m, res.output, k_max);
      Json j;
      j["m"] = m;
      j["k_max"] = res.k_max;
      j["truncation_bound"] = to_string(res.truncation_bound);
      j["constraint"] = res.output.constraint.name();
      Json ups = Json::array();
      for (const auto& u : res.output.updates) ups.push_back(update_json(u));
      j["output"] = ups;
      Json fails = Json::array();
      for (const auto& x : bad) fails.push_back(x.str());
      j["bound_failures"] = fails;
      emit_json(g, j);
      return bad.empty() ? 0 : kCertificationFailure;
    }

    if (*solve) {
      if (!against.empty()) {
        ShippedAlice a;
        if (against == "alice-3-4")
          a = ShippedAlice::ThreeQuarters;
        else if (against == "alice-2-3")
          a = ShippedAlice::TwoThirds;
        else
          throw std::invalid_argument("unknown strategy: " + against);
        const auto r = best_response(a, grid_arg(grid));
        emit_json(g, best_response_json(r));
        for (const auto& b : r.branches)
          if (b.feasible && !b.replay_agrees) return kCertificationFailure;
        return 0;
      }
      DiscreteGameSpec spec;
      spec.grid = grid_arg(grid);
      spec.budget = rational_arg(budget, "budget");
      spec.rounds = game_rounds;
      spec.threads = solve_threads;
      spec.max_states = max_states;
      const auto r = solve_game(spec);
      emit_json(g, solve_json(r));
      return r.replay_agrees ? 0 : kCertificationFailure;
    }

    if (*val) {
      const auto records = read_records(val_file);
      Json j;
      std::vector<Violation> found;
      std::string problem;
      if (!records.empty() && records.front().contains("type")) {
        j["kind"] = "transcript";
        std::stringstream ss;
        write_jsonl(ss, records);
        try {
          replay_verdicts(read_transcript(ss));
        } catch (const std::exception& e) {
          problem = e.what();
        }
      } else if (std::any_of(records.begin(), records.end(), [](const Json& r) { return r.contains("step"); })) {
        j["kind"] = "stream";
        const EnumerationStream s = parse_stream(records, OnlineConstraint::parse(val_constraint));
        j["constraint"] = s.constraint.name();
        if (auto bad = first_violation(s)) {
          found.push_back(bad->second);
          j["first_bad_update"] = bad->first;
        }
      } else {
        j["kind"] = "assignment";
        OnlineMassAssignment a;
        a.constraint = OnlineConstraint::parse(val_constraint);
        for (const Json& r : records) {
          if (r.contains("constraint") && !r.contains("node")) {
            a.constraint = OnlineConstraint::parse(r.at("constraint").get<std::string>());
            continue;
          }
          a.base.set(BitString(r.at("node").get<std::string>()), rational_from_json(r.at("value")));
        }
        j["constraint"] = a.constraint.name();
        found = validate(a);
      }
      const bool ok = found.empty() && problem.empty();
      j["valid"] = ok;
      j["violations"] = violations_json(found);
      if (!problem.empty()) j["error"] = problem;
      emit_json(g, j);
      return ok ? 0 : kCertificationFailure;
    }
  } catch (const CertificationFailure& e) {
    std::cerr << "certification failed: " << e.what() << "\n";
    return kCertificationFailure;
  } catch (const StreamError& e) {
    std::cerr << "invalid stream: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return 0;
}
