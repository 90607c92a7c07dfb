#include "asym/epsilon_search.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <stdexcept>
#include <thread>
#include <utility>

namespace asym {

BoxProof prove_nonnegative(const std::function<Interval(const Interval&)>& margin, const Rational& lo,
                           const Rational& hi, std::size_t max_boxes) {
  BoxProof out;
  if (lo > hi) {
    out.verdict = Certainty::Holds;  // empty domain
    return out;
  }
  for (const Rational& end : {lo, hi}) {
    if (certify_lt(margin(Interval(end)), Interval(0)) == Certainty::Holds) {
      out.verdict = Certainty::Fails;
      out.counterexample = end;
      return out;
    }
  }
  std::vector<std::pair<Rational, Rational>> stack{{lo, hi}};
  while (!stack.empty()) {
    auto [a, b] = stack.back();
    stack.pop_back();
    if (++out.boxes > max_boxes) {
      out.verdict = Certainty::Unknown;
      return out;
    }
    const Interval m = margin(Interval(a, b));
    const Rational m_lo = m.lower();
    if (m_lo >= 0) {
      if (!out.min_margin || m_lo < *out.min_margin) out.min_margin = m_lo;
      continue;
    }
    const Rational mid = (a + b) / 2;
    if (certify_lt(margin(Interval(mid)), Interval(0)) == Certainty::Holds) {
      out.verdict = Certainty::Fails;
      out.counterexample = mid;
      return out;
    }
    stack.emplace_back(mid, b);
    stack.emplace_back(a, mid);
  }
  out.verdict = Certainty::Holds;
  return out;
}

namespace {

InequalityResult point_check(std::string name, const Interval& lhs, const Interval& rhs) {
  InequalityResult r{std::move(name), "point", {}};
  r.proof.boxes = 1;
  r.proof.verdict = certify_le(lhs, rhs);
  if (r.proof.verdict == Certainty::Holds) r.proof.min_margin = (rhs - lhs).lower();
  return r;
}

}  // namespace

EpsilonCheck check_epsilon(const Rational& epsilon, std::size_t max_boxes) {
  if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
  EpsilonCheck out;
  out.epsilon = epsilon;
  const Interval e(epsilon);
  const Interval one(1);
  const Interval r2 = sqrt(Interval(2));
  const Interval th2 = 20 * e;  // squared balance threshold
  const Interval th = sqrt(th2);
  const Rational th2_q = 20 * epsilon;

  // Balanced, a the larger coordinate, s = (b/a)^2.
  out.results.push_back({"balanced o-norm", "s in [20e, 1]", prove_nonnegative([&](const Interval& s) {
                           return sqrt(one + s) - (one + 5 * e);
                         }, th2_q, Rational(1), max_boxes)});
  // Unbalanced, s = (b/a)^2 below the threshold.
  out.results.push_back({"unbalanced p-norm", "s in [0, 20e]", prove_nonnegative([&](const Interval& s) {
                           return sqrt(one + s) - (one + 2 * e) * (one + sqrt(s)) / r2;
                         }, Rational(0), th2_q, max_boxes)});
  // Unbalanced after a balanced stage, x = a_old / a.
  out.results.push_back({"unbalanced o-norm with history", "x in [0, 1]", prove_nonnegative([&](const Interval& x) {
                           return sqrt(one + th2 * x * x) - (one - e + 6 * e * x);
                         }, Rational(0), Rational(1), max_boxes)});
  out.results.push_back(point_check("history ratio bound", (one + 5 * e) * th, one));
  // Balanced after an unbalanced stage, t = b / a on both sides of 1.
  auto p_history = [&](const Interval& t) {
    return sqrt(2 * (one + t * t)) - (one - 4 * e) * (one + t) - 6 * e * (one + th);
  };
  out.results.push_back({"balanced p-norm with history", "t in [sqrt(20e), 1]",
                         prove_nonnegative(p_history, th.lower(), Rational(1), max_boxes)});
  out.results.push_back({"balanced p-norm with history", "t in [1, 1/sqrt(20e)]",
                         prove_nonnegative(p_history, Rational(1), (one / th).upper(), max_boxes)});
  const Interval alpha = one / r2 + e / 2;
  out.results.push_back(point_check("unbalanced product", alpha, (one + 2 * e) * (one - e) / r2));
  out.results.push_back(point_check("balanced product", alpha, (one + 5 * e) * (one - 4 * e) / r2));

  out.certified = std::all_of(out.results.begin(), out.results.end(),
                              [](const InequalityResult& r) { return r.proof.verdict == Certainty::Holds; });
  return out;
}

EpsilonSearchResult epsilon_search(const EpsilonSearchConfig& config) {
  if (config.grid_step <= 0 || config.max_epsilon < config.grid_step)
    throw std::invalid_argument("grid step must be positive and at most the maximum epsilon");
  EpsilonSearchResult out;
  out.config = config;
  std::vector<Rational> grid;
  for (Rational e = config.grid_step; e <= config.max_epsilon; e += config.grid_step) grid.push_back(e);
  out.grid.resize(grid.size());

  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(grid.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> workers;
  for (unsigned t = 0; t < threads; ++t)
    workers.push_back(std::async(std::launch::async, [&] {
      PrecisionScope scope(config.precision);
      for (std::size_t i = next++; i < grid.size(); i = next++) out.grid[i] = check_epsilon(grid[i], config.max_boxes);
    }));
  for (auto& w : workers) w.get();

  auto best = std::find_if(out.grid.rbegin(), out.grid.rend(), [](const EpsilonCheck& c) { return c.certified; });
  if (best == out.grid.rend()) throw std::runtime_error("no grid point certifies");
  out.best = *best;

  PrecisionScope scope(config.precision);
  const Interval one(1);
  out.alpha = one / sqrt(Interval(2)) + Interval(out.best.epsilon / 2);
  out.beta = -log2(out.alpha);
  out.beta_below_half = certify_lt(out.beta, Interval(make_rational(1, 2))) == Certainty::Holds;
  out.meets_target = certify_le(out.beta, Interval(out.target_beta)) == Certainty::Holds;
  out.target_epsilon = 2 * (exp2(-Interval(out.target_beta)) - one / sqrt(Interval(2)));
  return out;
}

Json epsilon_check_json(const EpsilonCheck& c) {
  Json j;
  j["epsilon"] = to_string(c.epsilon);
  j["certified"] = c.certified;
  Json list = Json::array();
  for (const auto& r : c.results) {
    Json x;
    x["inequality"] = r.name;
    x["domain"] = r.domain;
    x["verdict"] = certainty_name(r.proof.verdict);
    x["boxes"] = r.proof.boxes;
    x["min_margin"] = r.proof.min_margin ? Json(to_double(*r.proof.min_margin)) : Json(nullptr);
    x["counterexample"] = r.proof.counterexample ? Json(to_string(*r.proof.counterexample)) : Json(nullptr);
    list.push_back(x);
  }
  j["inequalities"] = list;
  return j;
}

Json epsilon_search_json(const EpsilonSearchResult& r, bool include_grid) {
  Json j;
  j["grid_step"] = to_string(r.config.grid_step);
  j["max_epsilon"] = to_string(r.config.max_epsilon);
  j["precision_bits"] = r.config.precision;
  j["grid_points"] = r.grid.size();
  std::size_t certified = 0;
  for (const auto& c : r.grid) certified += c.certified;
  j["certified_points"] = certified;
  j["epsilon"] = to_string(r.best.epsilon);
  j["alpha"] = interval_json(r.alpha);
  j["beta"] = interval_json(r.beta);
  j["beta_below_half"] = r.beta_below_half;
  j["target_beta"] = to_string(r.target_beta);
  j["meets_target"] = r.meets_target;
  j["target_epsilon"] = interval_json(r.target_epsilon);
  j["beta_gap"] = (r.beta - Interval(r.target_beta)).lo_string(6);
  j["best"] = epsilon_check_json(r.best);
  if (include_grid) {
    Json g = Json::array();
    for (const auto& c : r.grid) g.push_back(epsilon_check_json(c));
    j["grid"] = g;
  }
  return j;
}

}  // namespace asym
