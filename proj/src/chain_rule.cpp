#include "asym/chain_rule.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace asym {

namespace {

void require_split_depth(const OnlineConstraint& c, std::size_t m) {
  if (m != 0 && !c.sum_step(m))
    throw std::invalid_argument("condition length " + std::to_string(m) + " must sit at a sum depth");
}

}  // namespace

long ceil_neg_log2(const Rational& v) {
  if (v <= 0) throw std::invalid_argument("log of a nonpositive value");
  long k = 0;
  while (pow2(-k) > v) ++k;
  while (k > 0 && pow2(-(k - 1)) <= v) --k;
  return k;
}

ConditionalFamily chain_combine_forward(const EnumerationStream& joint, std::size_t m, long k) {
  if (k < 0) throw std::invalid_argument("k must be nonnegative");
  require_split_depth(joint.constraint, m);
  if (auto bad = first_violation(joint)) throw StreamError(bad->first, bad->second);

  ConditionalFamily fam;
  fam.m = m;
  fam.k = k;
  const Rational cap = pow2(-k);
  const Rational scale = pow2(k);
  const OnlineConstraint inner = joint.constraint.shifted(m);

  auto entry = [&](const BitString& x) -> Conditional& {
    auto [it, fresh] = fam.by_condition.try_emplace(x);
    if (fresh) it->second.stream.constraint = inner;
    return it->second;
  };

  for (const Update& u : joint.updates) {
    if (u.node.size() < m) continue;
    const BitString x = u.node.prefix(m);
    Conditional& c = entry(x);
    if (c.frozen_at) continue;
    if (u.node.size() == m && u.value > cap) {
      c.frozen_at = u.step;
      continue;
    }
    c.stream.updates.push_back({u.step, u.node.suffix_from(m), u.value * scale});
  }
  return fam;
}

BackwardResult chain_combine_backward(const EnumerationStream& marginal, const ConditionalStreams& conditionals,
                                      std::size_t m, long k_max) {
  require_split_depth(marginal.constraint, m);
  const OnlineConstraint inner = marginal.constraint.shifted(m);
  for (const auto& [key, s] : conditionals)
    if (key.first.size() != m || s.constraint != inner)
      throw std::invalid_argument("conditional for \"" + key.first.str() + "\" has the wrong shape");

  struct Source {
    const EnumerationStream* stream;
    BitString x;
    long k;
  };
  std::vector<Source> sources{{&marginal, BitString(), -1}};
  for (const auto& [key, s] : conditionals) sources.push_back({&s, key.first, key.second});

  // Merge by step; source order breaks ties.
  struct Event {
    long step;
    std::size_t source;
    std::size_t index;
  };
  std::vector<Event> events;
  for (std::size_t s = 0; s < sources.size(); ++s)
    for (std::size_t i = 0; i < sources[s].stream->updates.size(); ++i)
      events.push_back({sources[s].stream->updates[i].step, s, i});
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return a.step != b.step ? a.step < b.step : a.source < b.source;
  });

  StreamState marg(marginal.constraint);
  std::map<std::pair<BitString, long>, StreamState> cond;
  std::map<BitString, std::set<BitString>> touched;  // x -> y written by any conditional
  for (const auto& [key, s] : conditionals) cond.emplace(key, StreamState(inner));

  BackwardResult res;
  res.k_max = k_max;
  res.truncation_bound = pow2(-k_max - 1);
  res.output.constraint = marginal.constraint;
  OnlineMassAssignment out;
  out.constraint = marginal.constraint;

  auto emit = [&](long step, const BitString& z, const Rational& v) {
    if (v > out.value(z)) {
      out.set(z, v);
      res.output.updates.push_back({step, z, v});
    }
  };
  auto combined = [&](const BitString& x, const BitString& y) {
    const Rational mx = marg.value(x);
    Rational sum(0);
    if (mx <= 0) return sum;
    for (long k = ceil_neg_log2(std::min(mx, Rational(1))); k <= k_max; ++k) {
      auto it = cond.find({x, k});
      if (it != cond.end()) sum += pow2(-k - 1) * it->second.value(y);
    }
    return sum;
  };

  for (const Event& e : events) {
    const Source& src = sources[e.source];
    const Update& u = src.stream->updates[e.index];
    if (src.k < 0) {
      if (auto v = marg.apply(u)) throw StreamError(e.index, *v);
      if (u.node.size() < m) {
        emit(u.step, u.node, u.value);
      } else if (u.node.size() == m) {
        emit(u.step, u.node, combined(u.node, BitString()));
        for (const BitString& y : touched[u.node]) emit(u.step, u.node + y, combined(u.node, y));
      }
    } else {
      if (auto v = cond.at({src.x, src.k}).apply(u)) throw StreamError(e.index, *v);
      touched[src.x].insert(u.node);
      emit(u.step, src.x + u.node, combined(src.x, u.node));
    }
  }
  return res;
}

std::vector<BitString> backward_bound_failures(const EnumerationStream& marginal,
                                               const ConditionalStreams& conditionals, std::size_t m,
                                               const EnumerationStream& output, long k_max) {
  const OnlineMassAssignment marg = replay(marginal);
  const OnlineMassAssignment out = replay(output);
  std::vector<BitString> bad;
  for (const auto& [key, s] : conditionals) {
    if (key.first.size() != m) continue;
    const Rational mx = marg.value(key.first);
    if (mx <= 0 || key.second != ceil_neg_log2(std::min(mx, Rational(1))) || key.second > k_max) continue;
    const OnlineMassAssignment c = replay(s);
    std::set<BitString> ys{BitString()};
    for (const auto& [y, v] : c.base.entries()) ys.insert(y);
    for (const BitString& y : ys) {
      const BitString z = key.first + y;
      if (out.value(z) * 4 < mx * c.value(y)) bad.push_back(z);
    }
  }
  return bad;
}

}  // namespace asym
