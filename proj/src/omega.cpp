#include "asym/omega.hpp"

#include <algorithm>
#include <climits>

namespace asym {

namespace {

constexpr long kNever = LONG_MAX;

bool is_integer(const Rational& r) { return r.get_den() == 1; }

}  // namespace

StrategyParams StrategyParams::two_player(const Rational& epsilon) {
  if (epsilon <= 0 || epsilon >= 1) throw std::invalid_argument("epsilon must lie in (0, 1)");
  const Rational m = 2 / epsilon;
  if (!is_integer(m)) throw std::invalid_argument("epsilon must be 2/m for an integer m");
  StrategyParams p;
  p.epsilon = epsilon;
  p.k = 2;
  const long mi = m.get_num().get_si();
  p.delta = pow2(-mi);
  p.delta_pow = pow2(-mi + 2);
  p.beta_base = 1 - 2 * p.delta;
  p.beta_exponent = 2 - 2 * epsilon;
  return p;
}

StrategyParams StrategyParams::k_machine(int k, const Rational& epsilon) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  if (epsilon <= 0 || epsilon >= 1) throw std::invalid_argument("epsilon must lie in (0, 1)");
  const Rational q = 1 / epsilon;
  if (!is_integer(q)) throw std::invalid_argument("epsilon must be 1/q for an integer q");
  StrategyParams p;
  p.epsilon = epsilon;
  p.k = k;
  const unsigned long qi = q.get_num().get_ui();
  const Rational base(1, 2 * k);
  p.delta = pow(base, qi);
  p.delta_pow = pow(base, qi - 1);
  p.beta_base = 1 - 2 * p.delta;
  p.beta_exponent = k - k * epsilon;
  return p;
}

std::string variant_name(OmegaVariant v) {
  switch (v) {
    case OmegaVariant::ThreeQuarters: return "3-4";
    case OmegaVariant::Epsilon: return "eps";
    case OmegaVariant::Modular: return "kmod";
    case OmegaVariant::TwoThirds: return "2-3";
  }
  return "3-4";
}

BitString swap_pairs(const BitString& x) {
  std::string s = x.str();
  for (std::size_t i = 0; i + 1 < s.size(); i += 2) std::swap(s[i], s[i + 1]);
  return BitString(s);
}

OmegaBuilder::OmegaBuilder(OmegaVariant variant, std::vector<EnumerationStream> bobs,
                           std::optional<StrategyParams> params)
    : variant_(variant) {
  switch (variant) {
    case OmegaVariant::ThreeQuarters:
    case OmegaVariant::TwoThirds:
      params_.k = 2;
      params_.beta_base = make_rational(1, 2);
      params_.beta_exponent = 1;
      gamma_ = make_rational(1, 2);
      break;
    case OmegaVariant::Epsilon:
    case OmegaVariant::Modular:
      if (!params) throw std::invalid_argument("this variant needs strategy parameters");
      params_ = *params;
      gamma_ = params_.delta_pow;
      break;
  }
  block_ = static_cast<std::size_t>(params_.k);
  if (bobs.size() != block_) throw std::invalid_argument("expected " + std::to_string(block_) + " Bob streams");
  for (std::size_t i = 0; i < bobs.size(); ++i) {
    const auto want = OnlineConstraint::modulo(static_cast<int>(i) + 1, params_.k);
    if (bobs[i].constraint != want)
      throw std::invalid_argument("Bob stream " + std::to_string(i) + " must be " + want.name());
    if (auto bad = first_violation(bobs[i])) {
      if (!fault_)
        fault_ = want.name() + " stream, update " + std::to_string(bad->first) + ": " + rule_name(bad->second.rule) +
                 " at \"" + bad->second.node.str() + "\": " + bad->second.detail;
      bobs[i].updates.resize(bad->first);
    }
    bobs_.emplace_back(bobs[i]);
  }
}

ThresholdState OmegaBuilder::initial() const {
  ThresholdState s;
  s.scale.assign(block_, Rational(1));
  s.power.assign(block_, 0);
  return s;
}

Interval OmegaBuilder::threshold_value(const ThresholdState& s, std::size_t i) const {
  return Interval(s.scale[i]) * power_interval(params_.beta_base, params_.beta_exponent * s.power[i]);
}

BitString OmegaBuilder::event_block(std::size_t i) const {
  std::string b(block_, '0');
  b[i] = '1';
  b[block_ - 1] = '1';
  return BitString(b);
}

bool OmegaBuilder::exceeds(const Rational& q, const ThresholdState& s, std::size_t i, const Rational& factor) const {
  return rational_exceeds_power(q / (s.scale[i] * factor), params_.beta_base, params_.beta_exponent * s.power[i]);
}

std::optional<OmegaBuilder::Fire> OmegaBuilder::fire(const BitString& x, const ThresholdState& s) const {
  const BitString probe = x + BitString::zeros(block_);
  std::optional<Fire> best;
  for (std::size_t i = 0; i < block_; ++i) {
    const auto steps = bobs_[i].change_steps(probe);
    // Values only grow, so the crossing is monotone in time.
    auto it = std::partition_point(steps.begin(), steps.end(), [&](long t) {
      return !exceeds(bobs_[i].value_at(probe, t), s, i, gamma_);
    });
    if (it != steps.end() && (!best || *it < best->step)) best = Fire{*it, i};
  }
  return best;
}

ThresholdState OmegaBuilder::advance(const ThresholdState& s, std::optional<std::size_t> event) const {
  ThresholdState n = s;
  if (event) {
    ++n.power[*event];
    ++n.event_rounds;
  } else {
    for (auto& v : n.scale) v *= gamma_;
    ++n.quiet_rounds;
  }
  return n;
}

Rational OmegaBuilder::p_value(std::size_t j, const ThresholdState& s) const {
  if (variant_ == OmegaVariant::ThreeQuarters) {
    Rational v = pow(make_rational(4, 3), j);
    for (std::size_t i = 0; i < block_; ++i) v *= s.scale[i] * pow2(-s.power[i]);
    return v;
  }
  return pow(1 / (1 - params_.delta), j) * pow(params_.beta_base, static_cast<unsigned long>(s.event_rounds)) *
         pow(params_.delta, static_cast<unsigned long>(s.quiet_rounds));
}

void OmegaBuilder::visit(const BitString& x, std::size_t j, std::size_t rounds, const ThresholdState& s, long a,
                         long b, OmegaConstruction& out) const {
  out.visited[x] = s;
  out.P.set(x, p_value(j, s));
  if (j == rounds) return;
  const auto f = fire(x, s);
  const long fs = f ? f->step : kNever;
  if (fs > a) visit(x + BitString::zeros(block_), j + 1, rounds, advance(s, std::nullopt), a, std::min(fs, b), out);
  if (f && fs < b) visit(x + event_block(f->which), j + 1, rounds, advance(s, f->which), std::max(a, fs), b, out);
}

namespace {

// Nodes strictly inside a block carry the sum of the block-aligned nodes below.
void fill_block_interiors(MassAssignment& P, std::size_t block) {
  std::map<BitString, Rational> inner;
  for (const auto& [x, v] : P.entries()) {
    if (x.empty()) continue;
    const std::size_t top = ((x.size() - 1) / block) * block;
    for (std::size_t d = top + 1; d < x.size(); ++d) inner[x.prefix(d)] += v;
  }
  for (auto& [x, v] : inner) P.set(x, v);
}

}  // namespace

OmegaConstruction OmegaBuilder::build(std::size_t rounds) const {
  if (rounds < 1) throw std::invalid_argument("rounds must be at least 1");
  if (variant_ == OmegaVariant::TwoThirds) return build_two_thirds(rounds);

  OmegaConstruction out;
  out.variant = variant_;
  out.block = block_;
  out.fault = fault_;
  visit(BitString(), 0, rounds, initial(), LONG_MIN, kNever, out);
  fill_block_interiors(out.P, block_);

  ThresholdState s = initial();
  BitString x;
  for (std::size_t j = 0; j < rounds; ++j) {
    Round r;
    const auto f = fire(x, s);
    if (f) {
      r.block = event_block(f->which);
      EventKind kind = variant_ == OmegaVariant::Modular ? EventKind::Modular
                                                         : (f->which == 0 ? EventKind::Odd : EventKind::Even);
      r.event = ThresholdEvent{kind, static_cast<int>(f->which) + 1, x, f->step};
      out.events.push_back(*r.event);
      s = advance(s, f->which);
    } else {
      r.block = BitString::zeros(block_);
      s = advance(s, std::nullopt);
    }
    r.after = s;
    x = x + r.block;
    out.rounds.push_back(std::move(r));
  }
  out.omega = x;
  check(out, rounds);
  return out;
}

void OmegaBuilder::check(OmegaConstruction& out, std::size_t rounds) const {
  OmegaChecks& c = out.checks;
  c.thresholds_sound = c.inequality = c.identity = true;
  for (std::size_t j = 0; j <= rounds; ++j) {
    const BitString x = out.omega.prefix(j * block_);
    const ThresholdState& s = j == 0 ? out.visited.at(BitString()) : out.rounds[j - 1].after;
    const Rational p = out.P.get(x);
    Rational prod(1);
    for (std::size_t i = 0; i < block_; ++i) {
      const Rational q = bobs_[i].final_value(x);
      prod *= q;
      if (exceeds(q, s, i, Rational(1))) {
        c.thresholds_sound = false;
        c.failures.push_back("threshold " + std::to_string(i + 1) + " below Bob's value at \"" + x.str() + "\"");
      }
    }
    if (variant_ == OmegaVariant::ThreeQuarters) {
      if (prod > pow(make_rational(3, 4), j) * p) {
        c.inequality = false;
        c.failures.push_back("product bound fails at \"" + x.str() + "\"");
      }
      if (p != p_value(j, s)) c.identity = false;
      continue;
    }
    const Rational scale = pow(1 - params_.delta, j);
    if (rational_exceeds_power(prod / scale, p, params_.beta_exponent)) {
      c.inequality = false;
      c.failures.push_back("product bound fails at \"" + x.str() + "\"");
    }
    PrecisionScope scope(256);
    Interval all(1);
    for (std::size_t i = 0; i < block_; ++i) all *= threshold_value(s, i);
    const Interval root = pow(all, Interval(1 / params_.beta_exponent));
    const Interval lhs(scale * p);
    if (certify_le(root, lhs) == Certainty::Fails || certify_le(lhs, root) == Certainty::Fails) {
      c.identity = false;
      c.failures.push_back("closed form of P fails at \"" + x.str() + "\"");
    }
  }
  const auto v = validate(out.P);
  c.semimeasure = v.empty();
  for (const auto& e : v) c.failures.push_back("P " + rule_name(e.rule) + " at \"" + e.node.str() + "\": " + e.detail);
}

BitString OmegaBuilder::decode(const BitString& prefix, int last_bit) const {
  if (variant_ == OmegaVariant::TwoThirds) throw UndefinedInput("the 2/3 construction has no decoder");
  if (prefix.size() % block_ != 0) throw UndefinedInput("prefix is not block aligned");
  ThresholdState s = initial();
  for (std::size_t j = 0; j < prefix.size(); j += block_) {
    const BitString blk = prefix.prefix(j + block_).suffix_from(j);
    if (blk == BitString::zeros(block_)) {
      s = advance(s, std::nullopt);
      continue;
    }
    std::optional<std::size_t> which;
    for (std::size_t i = 0; i < block_; ++i)
      if (event_block(i) == blk) which = i;
    if (!which) throw UndefinedInput("block \"" + blk.str() + "\" is never written");
    s = advance(s, which);
  }
  if (last_bit == 0) return BitString::zeros(block_ - 1);
  const auto f = fire(prefix, s);
  if (!f) throw UndefinedInput("no event fires after \"" + prefix.str() + "\"");
  return event_block(f->which).prefix(block_ - 1);
}

OmegaConstruction OmegaBuilder::build_two_thirds(std::size_t rounds) const {
  OmegaConstruction out;
  out.variant = variant_;
  out.block = 2;
  out.fault = fault_;
  visit_two_thirds(BitString(), 0, rounds, Rational(1), LONG_MIN, kNever, out);
  fill_block_interiors(out.P, 2);

  const StreamHistory& odd = bobs_[0];
  const StreamHistory& even = bobs_[1];
  auto crossing = [&](const BitString& node, const Rational& cap) -> long {
    std::vector<long> steps = odd.change_steps(node);
    for (long s : even.change_steps(node)) steps.push_back(s);
    std::sort(steps.begin(), steps.end());
    auto it = std::partition_point(steps.begin(), steps.end(), [&](long t) {
      return odd.value_at(node, t) * even.value_at(node, t) <= cap;
    });
    return it == steps.end() ? kNever : *it;
  };

  Rational t(1);
  BitString x;
  for (std::size_t j = 0; j < rounds; ++j) {
    Round r;
    const long f00 = crossing(x + "00"_bits, t / 9);
    const long f10 = crossing(x + "10"_bits, t / 9);
    const long f2 = std::max(f00, f10);
    if (f00 == kNever) {
      r.block = "00"_bits;
      t /= 9;
    } else if (f2 == kNever) {
      r.block = "10"_bits;
      r.event = ThresholdEvent{EventKind::T00, 0, x, f00};
      out.events.push_back(*r.event);
      t /= 9;
    } else {
      const bool left = odd.value_at(x + "0"_bits, f2) >= odd.value_at(x + "1"_bits, f2);
      r.block = left ? "11"_bits : "01"_bits;
      out.events.push_back(ThresholdEvent{EventKind::T00, 0, x, f00});
      r.event = ThresholdEvent{EventKind::T10, 0, x, f10};
      out.events.push_back(*r.event);
      t = t * 4 / 9;
    }
    r.after.scale = {t};
    r.after.power = {0};
    x = x + r.block;
    out.rounds.push_back(std::move(r));
  }
  out.omega = x;

  // Factorization of P with swapped bit pairs.
  OnlineMassAssignment po, pe;
  po.constraint = OnlineConstraint::odd();
  pe.constraint = OnlineConstraint::even();
  po.set(BitString(), Rational(1));
  pe.set(BitString(), Rational(1));
  const Rational third(1, 3), two_thirds(2, 3), half(1, 2);
  for (const auto& [v, st] : out.visited) {
    if (v.size() >= 2 * rounds) continue;
    const BitString sx = swap_pairs(v);
    const Rational o = po.value(sx), e = pe.value(sx);
    po.set(sx.child(0), o * third);
    po.set(sx.child(1), o * two_thirds);
    for (int b : {0, 1}) {
      po.set(sx.child(0).child(b), o * third);
      po.set(sx.child(1).child(b), o * two_thirds);
    }
    pe.set(sx.child(0), e);
    pe.set(sx.child(1), e);
    for (const char* c : {"00", "10", "11", "01"}) {
      const BitString orig(c);
      if (!out.visited.count(v + orig)) continue;
      const BitString sc = swap_pairs(orig);
      pe.set(sx + sc, sc.bit(0) == 0 ? Rational(e * half) : e);
    }
  }

  OmegaChecks& ch = out.checks;
  ch.thresholds_sound = ch.inequality = ch.identity = true;
  for (std::size_t j = 0; j <= rounds; ++j) {
    const BitString y = out.omega.prefix(2 * j);
    const Rational tj = j == 0 ? Rational(1) : out.rounds[j - 1].after.scale[0];
    const Rational prod = odd.final_value(y) * even.final_value(y);
    const Rational growth = pow(make_rational(3, 2), j);
    if (prod > tj) {
      ch.thresholds_sound = false;
      ch.failures.push_back("threshold below Bob's product at \"" + y.str() + "\"");
    }
    if (growth * prod > out.P.get(y)) {
      ch.inequality = false;
      ch.failures.push_back("product bound fails at \"" + y.str() + "\"");
    }
    if (out.P.get(y) != growth * tj) ch.identity = false;
  }
  for (const auto& [v, st] : out.visited) {
    const BitString sv = swap_pairs(v);
    if (po.value(sv) * pe.value(sv) != out.P.get(v)) {
      ch.identity = false;
      ch.failures.push_back("swapped factorization fails at \"" + v.str() + "\"");
    }
  }
  for (const auto* a : {&po, &pe})
    for (const auto& e : validate(*a))
      ch.failures.push_back(a->constraint.name() + " factor " + rule_name(e.rule) + " at \"" + e.node.str() + "\"");
  const auto bad = validate(out.P);
  ch.semimeasure = bad.empty() && validate(po).empty() && validate(pe).empty();
  for (const auto& e : bad) ch.failures.push_back("P " + rule_name(e.rule) + " at \"" + e.node.str() + "\"");
  out.swapped_odd = std::move(po);
  out.swapped_even = std::move(pe);
  return out;
}

void OmegaBuilder::visit_two_thirds(const BitString& x, std::size_t j, std::size_t rounds, const Rational& t, long a,
                                    long b, OmegaConstruction& out) const {
  ThresholdState st;
  st.scale = {t};
  st.power = {0};
  out.visited[x] = st;
  out.P.set(x, pow(make_rational(3, 2), j) * t);
  if (j == rounds) return;

  const StreamHistory& odd = bobs_[0];
  const StreamHistory& even = bobs_[1];
  auto crossing = [&](const BitString& node) -> long {
    std::vector<long> steps = odd.change_steps(node);
    for (long s : even.change_steps(node)) steps.push_back(s);
    std::sort(steps.begin(), steps.end());
    auto it = std::partition_point(steps.begin(), steps.end(), [&](long s) {
      return odd.value_at(node, s) * even.value_at(node, s) * 9 <= t;
    });
    return it == steps.end() ? kNever : *it;
  };
  const long f1 = crossing(x + "00"_bits);
  const long f10 = crossing(x + "10"_bits);
  const long f2 = (f1 == kNever || f10 == kNever) ? kNever : std::max(f1, f10);

  if (a < std::min(f1, b)) visit_two_thirds(x + "00"_bits, j + 1, rounds, t / 9, a, std::min(f1, b), out);
  if (std::max(a, f1) < std::min(f2, b))
    visit_two_thirds(x + "10"_bits, j + 1, rounds, t / 9, std::max(a, f1), std::min(f2, b), out);
  if (f2 != kNever && std::max(a, f2) < b) {
    const bool left = odd.value_at(x + "0"_bits, f2) >= odd.value_at(x + "1"_bits, f2);
    visit_two_thirds(x + (left ? "11"_bits : "01"_bits), j + 1, rounds, t * 4 / 9, std::max(a, f2), b, out);
  }
}

OmegaConstruction build_omega_34(const EnumerationStream& odd, const EnumerationStream& even, std::size_t rounds) {
  return OmegaBuilder(OmegaVariant::ThreeQuarters, {odd, even}).build(rounds);
}

OmegaConstruction build_omega_eps(const EnumerationStream& odd, const EnumerationStream& even, std::size_t rounds,
                                  const StrategyParams& params) {
  return OmegaBuilder(OmegaVariant::Epsilon, {odd, even}, params).build(rounds);
}

OmegaConstruction build_omega_kmod(const std::vector<EnumerationStream>& bobs, std::size_t rounds,
                                   const StrategyParams& params) {
  return OmegaBuilder(OmegaVariant::Modular, bobs, params).build(rounds);
}

OmegaConstruction build_omega_23(const EnumerationStream& odd, const EnumerationStream& even, std::size_t rounds) {
  return OmegaBuilder(OmegaVariant::TwoThirds, {odd, even}).build(rounds);
}

Json construction_json(const OmegaConstruction& c, const OmegaBuilder& builder) {
  Json j;
  j["variant"] = variant_name(c.variant);
  j["block"] = c.block;
  j["omega"] = c.omega.str();
  Json rounds = Json::array();
  for (const Round& r : c.rounds) {
    Json jr;
    jr["block"] = r.block.str();
    if (r.event) {
      Json e;
      e["kind"] = event_kind_name(r.event->kind);
      if (r.event->kind == EventKind::Modular) e["index"] = r.event->index;
      e["step"] = r.event->step;
      jr["event"] = e;
    } else {
      jr["event"] = nullptr;
    }
    Json th = Json::array();
    for (std::size_t i = 0; i < r.after.scale.size(); ++i) {
      Json t;
      t["scale"] = to_string(r.after.scale[i]);
      t["beta_power"] = r.after.power[i];
      if (c.variant != OmegaVariant::TwoThirds) {
        PrecisionScope scope(128);
        const Interval v = builder.threshold_value(r.after, i);
        t["interval"] = interval_json(v);
      }
      th.push_back(t);
    }
    jr["thresholds"] = th;
    rounds.push_back(jr);
  }
  j["rounds"] = rounds;
  Json p;
  for (const auto& [node, v] : c.P.entries()) p[node.empty() ? "" : node.str()] = to_string(v);
  j["P"] = p;
  Json checks;
  checks["thresholds_sound"] = c.checks.thresholds_sound;
  checks["semimeasure"] = c.checks.semimeasure;
  checks["inequality"] = c.checks.inequality;
  checks["identity"] = c.checks.identity;
  checks["failures"] = c.checks.failures;
  j["checks"] = checks;
  j["fault"] = c.fault ? Json(*c.fault) : Json(nullptr);
  return j;
}

}  // namespace asym
