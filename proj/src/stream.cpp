#include "asym/stream.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

namespace asym {

std::optional<Violation> StreamState::apply(std::span<const Update> batch) {
  const OnlineConstraint& c = current_.constraint;
  OnlineMassAssignment next = current_;
  long step = last_step_;
  for (const Update& u : batch) {
    if (u.step < step)
      return Violation{Violation::Rule::StepOrder, u.node,
                       "step " + std::to_string(u.step) + " precedes " + std::to_string(step)};
    step = u.step;
    if (c.canonical(u.node) != u.node)
      return Violation{Violation::Rule::CopyNodeUpdate, u.node, "update at a copy depth"};
    Rational prev = next.value(u.node);
    if (u.value <= prev)
      return Violation{Violation::Rule::Decrease, u.node,
                       "value " + to_string(u.value) + " does not exceed " + to_string(prev)};
    next.set(u.node, u.value);
  }
  for (const Update& u : batch) {
    if (u.node.empty()) continue;
    BitString parent = u.node.parent();
    Rational s = next.value(parent.child(0)) + next.value(parent.child(1));
    Rational cap = next.value(parent);
    if (s > cap)
      return Violation{Violation::Rule::SumRule, parent,
                       "children sum " + to_string(s) + " > " + to_string(cap)};
  }
  Rational root = next.value(BitString());
  if (root > 1) return Violation{Violation::Rule::RootAboveOne, BitString(), "root " + to_string(root) + " > 1"};
  current_ = std::move(next);
  last_step_ = step;
  return std::nullopt;
}

StreamError::StreamError(std::size_t i, Violation v)
    : std::runtime_error("update " + std::to_string(i) + " at node \"" + v.node.str() + "\": " +
                         rule_name(v.rule) + ": " + v.detail),
      index(i),
      violation(std::move(v)) {}

std::optional<std::pair<std::size_t, Violation>> first_violation(const EnumerationStream& stream) {
  StreamState state(stream.constraint);
  for (std::size_t i = 0; i < stream.updates.size(); ++i)
    if (auto v = state.apply(stream.updates[i])) return std::make_pair(i, *v);
  return std::nullopt;
}

OnlineMassAssignment replay(const EnumerationStream& stream) {
  StreamState state(stream.constraint);
  for (std::size_t i = 0; i < stream.updates.size(); ++i)
    if (auto v = state.apply(stream.updates[i])) throw StreamError(i, *v);
  return state.assignment();
}

StreamHistory::StreamHistory(const EnumerationStream& stream) : constraint_(stream.constraint) {
  if (auto bad = first_violation(stream)) throw StreamError(bad->first, bad->second);
  for (const Update& u : stream.updates) history_[u.node].emplace_back(u.step, u.value);
}

Rational StreamHistory::value_at(const BitString& node, long t) const {
  auto it = history_.find(constraint_.canonical(node));
  if (it == history_.end()) return Rational(0);
  const auto& h = it->second;
  auto pos = std::upper_bound(h.begin(), h.end(), t, [](long s, const auto& e) { return s < e.first; });
  if (pos == h.begin()) return Rational(0);
  return std::prev(pos)->second;
}

Rational StreamHistory::final_value(const BitString& node) const {
  auto it = history_.find(constraint_.canonical(node));
  return it == history_.end() ? Rational(0) : it->second.back().second;
}

std::vector<long> StreamHistory::change_steps(const BitString& node) const {
  std::vector<long> out;
  auto it = history_.find(constraint_.canonical(node));
  if (it != history_.end())
    for (const auto& e : it->second)
      if (out.empty() || out.back() != e.first) out.push_back(e.first);
  return out;
}

Json update_json(const Update& u) {
  Json j;
  j["step"] = u.step;
  j["node"] = u.node.str();
  j["num"] = numerator_string(u.value);
  j["den"] = denominator_string(u.value);
  return j;
}

Update update_from_json(const Json& j) {
  Update u;
  u.step = j.at("step").get<long>();
  u.node = BitString(j.at("node").get<std::string>());
  u.value = from_parts(j.at("num").get<std::string>(), j.at("den").get<std::string>());
  return u;
}

void write_stream(std::ostream& out, const EnumerationStream& stream, bool with_header) {
  if (with_header) {
    Json h;
    h["constraint"] = stream.constraint.name();
    out << h.dump() << '\n';
  }
  for (const Update& u : stream.updates) out << update_json(u).dump() << '\n';
}

EnumerationStream parse_stream(const std::vector<Json>& records, OnlineConstraint fallback) {
  EnumerationStream s;
  s.constraint = fallback;
  std::size_t first = 0;
  if (!records.empty() && records.front().contains("constraint") && !records.front().contains("node")) {
    s.constraint = OnlineConstraint::parse(records.front().at("constraint").get<std::string>());
    first = 1;
  }
  for (std::size_t i = first; i < records.size(); ++i) {
    try {
      s.updates.push_back(update_from_json(records[i]));
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("record " + std::to_string(i) + ": " + e.what());
    }
  }
  return s;
}

EnumerationStream read_stream(std::istream& in, OnlineConstraint fallback) {
  EnumerationStream s = parse_stream(read_jsonl(in), fallback);
  if (auto bad = first_violation(s)) throw StreamError(bad->first, bad->second);
  return s;
}

}  // namespace asym
