#include "asym/upper_bound.hpp"

#include <random>

namespace asym {

namespace {

Interval sqrt2() { return sqrt(Interval(2)); }

IVector scaled(const Interval& c, const IVector& w) {
  IVector out(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) out(i) = c * w(i);
  return out;
}

IVector elementwise_max(const IVector& a, const IVector& b) {
  IVector out(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out(i) = max(a(i), b(i));
  return out;
}

IVector zeros(std::size_t n) { return IVector::Constant(static_cast<Eigen::Index>(n), Interval(0)); }

}  // namespace

Interval l2_from_squares(const std::vector<Rational>& squares) {
  Rational s(0);
  for (const auto& v : squares) s += v;
  return sqrt(Interval(s));
}

UpperBoundParams::UpperBoundParams(Rational eps) : epsilon(std::move(eps)) {
  if (epsilon < 0) throw std::invalid_argument("epsilon must be nonnegative");
}

Interval UpperBoundParams::alpha() const { return Interval(1) / sqrt2() + Interval(epsilon / 2); }

Interval UpperBoundParams::balance_threshold() const { return sqrt(Interval(20 * epsilon)); }

Interval UpperBoundParams::beta() const { return -log2(alpha()); }

bool UpperBoundParams::balanced(const Rational& a2, const Rational& b2) const {
  return 20 * epsilon * a2 <= b2 && 20 * epsilon * b2 <= a2;
}

PairStep combine_pair(const UpperBoundParams& params, const Rational& a2, const Rational& b2, const IVector& w_o,
                      const IVector& w_p, const IVector& o_old, const IVector& p_old) {
  const Rational& e = params.epsilon;
  const Interval r2 = sqrt2();
  PairStep s;
  s.balanced = params.balanced(a2, b2);
  if (s.balanced) {
    s.p = elementwise_max(p_old, scaled(Interval(1 - 4 * e) / r2, w_o));
    s.o = scaled(Interval(1 + 5 * e), w_p);
  } else {
    s.p = scaled(Interval(1 + 2 * e) / r2, w_o);
    s.o = elementwise_max(o_old, scaled(Interval(1 - e), w_p));
  }
  return s;
}

PairOperator::PairOperator(Rational epsilon) : params_(std::move(epsilon)), o_old_(zeros(2)), p_old_(zeros(2)) {}

PairStep PairOperator::update(const Rational& a2, const Rational& b2) {
  if (a2 < 0 || b2 < 0) throw std::invalid_argument("squared coordinates must be nonnegative");
  IVector v(2);
  v(0) = sqrt(Interval(a2));
  v(1) = sqrt(Interval(b2));
  PairStep s = combine_pair(params_, a2, b2, v, v, o_old_, p_old_);
  o_old_ = s.o;
  p_old_ = s.p;
  return s;
}

OpTree::OpTree(std::size_t dim, Rational epsilon) : params_(std::move(epsilon)), leaves_(dim, Rational(0)) {
  detail::require_power_of_two(dim);
  nodes_.resize(2 * dim - 1);
  nodes_[0].begin = 0;
  nodes_[0].len = dim;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    Node& n = nodes_[i];
    n.o = zeros(n.len);
    n.p = zeros(n.len);
    if (n.len == 1) continue;
    const std::size_t h = n.len / 2;
    nodes_[2 * i + 1].begin = n.begin;
    nodes_[2 * i + 1].len = h;
    nodes_[2 * i + 2].begin = n.begin + h;
    nodes_[2 * i + 2].len = h;
  }
}

std::string OpTree::update(const LeafUpdate& step) {
  if (step.index >= leaves_.size()) throw std::out_of_range("leaf index out of range");
  if (step.mass < leaves_[step.index]) throw std::invalid_argument("leaf masses may only increase");
  leaves_[step.index] = step.mass;
  std::string log;
  recompute(0, log);
  // Heap order is already level order.
  std::string ordered;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].len > 1) ordered += log[i];
  return ordered;
}

void OpTree::recompute(std::size_t i, std::string& log) {
  Node& n = nodes_[i];
  if (log.size() < nodes_.size()) log.resize(nodes_.size(), '.');
  if (n.len == 1) {
    n.o(0) = sqrt(Interval(leaves_[n.begin]));
    n.p(0) = n.o(0);
    return;
  }
  recompute(2 * i + 1, log);
  recompute(2 * i + 2, log);
  const Node& l = nodes_[2 * i + 1];
  const Node& r = nodes_[2 * i + 2];
  const auto h = static_cast<Eigen::Index>(l.len);
  IVector w_o(2 * h), w_p(2 * h);
  w_o << l.o, r.o;
  w_p << l.p, r.p;
  Rational a2(0), b2(0);
  for (std::size_t k = 0; k < l.len; ++k) a2 += leaves_[l.begin + k];
  for (std::size_t k = 0; k < r.len; ++k) b2 += leaves_[r.begin + k];
  PairStep s = combine_pair(params_, a2, b2, w_o, w_p, n.o, n.p);
  n.o = std::move(s.o);
  n.p = std::move(s.p);
  log[i] = s.balanced ? 'B' : 'U';
}

std::vector<LeafUpdate> random_history(std::size_t dim, std::size_t updates, std::uint64_t seed) {
  detail::require_power_of_two(dim);
  std::mt19937_64 rng(seed);
  const long unit = 8 * static_cast<long>(dim);
  std::vector<long> mass(dim, 0);
  long total = 0;
  std::vector<LeafUpdate> out;
  while (out.size() < updates && total < unit) {
    const std::size_t i = rng() % dim;
    const long room = unit - total;
    const long step = 1 + static_cast<long>(rng() % static_cast<std::uint64_t>(std::min<long>(room, 4)));
    mass[i] += step;
    total += step;
    out.push_back({i, make_rational(mass[i], unit)});
  }
  return out;
}

std::vector<ConditionCheck> certify_conditions(const OpTree& tree, std::size_t stage) {
  std::vector<ConditionCheck> out;
  const Interval alpha = tree.params().alpha();
  const auto& m = tree.masses();
  for (const auto& n : tree.nodes()) {
    if (n.len == 1) continue;
    Rational s(0);
    for (std::size_t k = 0; k < n.len; ++k) s += m[n.begin + k];
    const Interval root = sqrt(Interval(s));
    auto add = [&](std::string name, const Interval& lhs, const Interval& rhs) {
      out.push_back({stage, n.begin, n.len, std::move(name), certify_le(lhs, rhs), interval_string(lhs, 12),
                     interval_string(rhs, 12)});
    };
    add("oi-norm of o <= l2 of u", norm_oi(n.o), root);
    add("io-norm of p <= l2 of u", norm_io(n.p), root);
    const Interval scale = pow(alpha, Interval(static_cast<long>(log2_exact(n.len))));
    for (std::size_t k = 0; k < n.len; ++k) {
      const auto ix = static_cast<Eigen::Index>(k);
      add("o*p >= alpha^n u^2 at " + std::to_string(n.begin + k), scale * Interval(m[n.begin + k]),
          n.o(ix) * n.p(ix));
    }
  }
  return out;
}

namespace {

UpperBoundReport run_once(std::size_t dim, const Rational& epsilon, const std::vector<LeafUpdate>& history,
                          bool& inconclusive) {
  UpperBoundReport r;
  r.epsilon = epsilon;
  r.dim = dim;
  r.stages = history.size();
  r.precision = Interval::precision();
  OpTree tree(dim, epsilon);
  inconclusive = false;
  std::vector<OpTree::Node> previous = tree.nodes();
  for (std::size_t s = 0; s < history.size(); ++s) {
    r.stage_log.push_back(tree.update(history[s]));
    for (auto& c : certify_conditions(tree, s + 1)) {
      ++r.checks_run;
      if (c.result == Certainty::Unknown) inconclusive = true;
      if (c.result != Certainty::Holds) r.failures.push_back(std::move(c));
    }
    const auto& now = tree.nodes();
    for (std::size_t i = 0; i < now.size(); ++i)
      for (Eigen::Index k = 0; k < now[i].o.size(); ++k)
        if (certify_le(previous[i].o(k), now[i].o(k)) == Certainty::Fails ||
            certify_le(previous[i].p(k), now[i].p(k)) == Certainty::Fails)
          r.monotone = false;
    previous = now;
  }
  r.certified = r.failures.empty() && r.monotone;

  for (Eigen::Index k = 0; k < tree.o().size(); ++k) {
    r.o_upper.push_back(tree.o()(k).upper());
    r.p_upper.push_back(tree.p()(k).upper());
  }
  r.p_even = min_online_from_leaves(r.o_upper, OnlineConstraint::even());
  r.p_odd = min_online_from_leaves(r.p_upper, OnlineConstraint::odd());
  r.assembled_valid = r.p_even.is_semimeasure && r.p_odd.is_semimeasure && validate(r.p_even.assignment).empty() &&
                      validate(r.p_odd.assignment).empty();
  const std::size_t n = log2_exact(dim);
  const Interval scale = pow(UpperBoundParams(epsilon).alpha(), Interval(static_cast<long>(n)));
  r.product_bound = true;
  for (std::size_t k = 0; k < dim; ++k) {
    const BitString x = BitString::from_index(k, n);
    const Rational prod = r.p_odd.assignment.value(x) * r.p_even.assignment.value(x);
    const Certainty c = certify_le(scale * Interval(tree.masses()[k]), Interval(prod));
    if (c == Certainty::Unknown) inconclusive = true;
    if (c != Certainty::Holds) r.product_bound = false;
  }
  return r;
}

}  // namespace

UpperBoundReport verify_upper_bound(std::size_t dim, const Rational& epsilon, const std::vector<LeafUpdate>& history,
                                    mpfr_prec_t precision) {
  detail::require_power_of_two(dim);
  std::vector<Rational> mass(dim, Rational(0));
  Rational total(0);
  for (const auto& u : history) {
    if (u.index >= dim) throw std::invalid_argument("leaf index " + std::to_string(u.index) + " out of range");
    if (u.mass < mass[u.index]) throw std::invalid_argument("history is not monotone at leaf " + std::to_string(u.index));
    total += u.mass - mass[u.index];
    mass[u.index] = u.mass;
    if (total > 1) throw std::invalid_argument("total mass exceeds one");
  }
  for (mpfr_prec_t bits = precision;; bits *= 2) {
    PrecisionScope scope(bits);
    bool inconclusive = false;
    UpperBoundReport r = run_once(dim, epsilon, history, inconclusive);
    if (!inconclusive || bits * 2 > kMaxPrecision) return r;
  }
}

Json upper_bound_json(const UpperBoundReport& r) {
  Json j;
  const UpperBoundParams params(r.epsilon);
  PrecisionScope scope(r.precision);
  j["epsilon"] = to_string(r.epsilon);
  j["dim"] = r.dim;
  j["stages"] = r.stages;
  j["precision_bits"] = r.precision;
  j["alpha"] = interval_json(params.alpha());
  j["beta"] = interval_json(params.beta());
  j["certified"] = r.certified;
  j["monotone"] = r.monotone;
  j["checks_run"] = r.checks_run;
  Json fails = Json::array();
  for (const auto& c : r.failures) {
    Json f;
    f["stage"] = c.stage;
    f["node"] = Json::array({c.begin, c.len});
    f["condition"] = c.condition;
    f["result"] = certainty_name(c.result);
    f["lhs"] = c.lhs;
    f["rhs"] = c.rhs;
    fails.push_back(f);
  }
  j["failures"] = fails;
  j["stage_log"] = r.stage_log;
  j["root_odd"] = to_string(r.p_odd.root());
  j["root_even"] = to_string(r.p_even.root());
  j["assembled_valid"] = r.assembled_valid;
  j["product_bound"] = r.product_bound;
  j["reported_slack"] = to_string(r.reported_slack);
  return j;
}

}  // namespace asym
