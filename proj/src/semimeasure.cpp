#include "asym/semimeasure.hpp"

#include <set>
#include <stdexcept>

namespace asym {

OnlineConstraint OnlineConstraint::modulo(int residue, int modulus) {
  if (modulus < 1 || residue < 1 || residue > modulus)
    throw std::invalid_argument("constraint needs 1 <= residue <= modulus");
  return OnlineConstraint(modulus, residue);
}

OnlineConstraint OnlineConstraint::shifted(std::size_t offset) const {
  if (modulus_ == 1) return *this;
  long r = (residue_ - static_cast<long>(offset % static_cast<std::size_t>(modulus_))) % modulus_;
  if (r <= 0) r += modulus_;
  return OnlineConstraint(modulus_, static_cast<int>(r));
}

BitString OnlineConstraint::canonical(const BitString& node) const {
  std::size_t len = node.size();
  while (len > 0 && !sum_step(len)) --len;
  return node.prefix(len);
}

std::string OnlineConstraint::name() const {
  if (modulus_ == 1) return "plain";
  if (modulus_ == 2) return residue_ == 1 ? "odd" : "even";
  return std::to_string(residue_) + " mod " + std::to_string(modulus_);
}

OnlineConstraint OnlineConstraint::parse(std::string_view name) {
  if (name == "plain") return plain();
  if (name == "odd") return odd();
  if (name == "even") return even();
  auto pos = name.find(" mod ");
  if (pos == std::string_view::npos) throw std::invalid_argument("unknown constraint: " + std::string(name));
  return modulo(std::stoi(std::string(name.substr(0, pos))), std::stoi(std::string(name.substr(pos + 5))));
}

const Rational& MassAssignment::get(const BitString& node) const {
  static const Rational zero(0);
  auto it = entries_.find(node);
  return it == entries_.end() ? zero : it->second;
}

std::size_t MassAssignment::max_depth() const {
  std::size_t d = 0;
  for (const auto& [k, v] : entries_) d = std::max(d, k.size());
  return d;
}

Rational OnlineMassAssignment::value(const BitString& node) const {
  BitString x = node;
  for (;;) {
    auto it = base.entries().find(x);
    if (it != base.entries().end()) return it->second;
    if (x.empty() || constraint.sum_step(x.size())) return Rational(0);
    x = x.parent();
  }
}

std::string rule_name(Violation::Rule rule) {
  switch (rule) {
    case Violation::Rule::Negative: return "negative";
    case Violation::Rule::RootAboveOne: return "root-above-one";
    case Violation::Rule::SumRule: return "sum-rule";
    case Violation::Rule::CopyRule: return "copy-rule";
    case Violation::Rule::Decrease: return "decrease";
    case Violation::Rule::CopyNodeUpdate: return "copy-node-update";
    case Violation::Rule::StepOrder: return "step-order";
  }
  return "unknown";
}

std::vector<Violation> validate(const MassAssignment& assignment) {
  return validate(OnlineMassAssignment{assignment, OnlineConstraint::plain()});
}

std::vector<Violation> validate(const OnlineMassAssignment& a) {
  std::vector<Violation> out;
  std::set<BitString> closure{BitString()};
  for (const auto& [node, value] : a.base.entries()) {
    if (value < 0) out.push_back({Violation::Rule::Negative, node, "value " + to_string(value) + " < 0"});
    for (BitString x = node; closure.insert(x).second && !x.empty();) x = x.parent();
  }
  Rational root = a.value(BitString());
  if (root > 1) out.push_back({Violation::Rule::RootAboveOne, BitString(), "root " + to_string(root) + " > 1"});

  for (const BitString& x : closure) {
    BitString c0 = x.child(0), c1 = x.child(1);
    if (!closure.count(c0) && !closure.count(c1)) continue;
    Rational parent = a.value(x);
    if (a.constraint.sum_step(x.size() + 1)) {
      Rational s = a.value(c0) + a.value(c1);
      if (s > parent)
        out.push_back({Violation::Rule::SumRule, x,
                       "children sum " + to_string(s) + " > " + to_string(parent)});
    } else {
      for (const BitString& c : {c0, c1}) {
        if (!a.base.contains(c)) continue;
        const Rational& v = a.base.get(c);
        if (v != parent)
          out.push_back({Violation::Rule::CopyRule, c,
                         "value " + to_string(v) + " != parent " + to_string(parent)});
      }
    }
  }
  return out;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t log2_exact(std::size_t n) {
  if (!is_power_of_two(n)) throw std::invalid_argument("dimension " + std::to_string(n) + " is not a power of two");
  std::size_t d = 0;
  while ((std::size_t{1} << d) < n) ++d;
  return d;
}

LeafFold min_online_from_leaves(std::span<const Rational> leaves, OnlineConstraint constraint) {
  const std::size_t n = log2_exact(leaves.size());
  for (const auto& v : leaves)
    if (v < 0) throw std::invalid_argument("leaf values must be nonnegative");

  // levels[d][i] is the minimal value at the i-th node of depth d.
  std::vector<std::vector<Rational>> levels(n + 1);
  levels[n].assign(leaves.begin(), leaves.end());
  for (std::size_t d = n; d > 0; --d) {
    auto& up = levels[d - 1];
    const auto& low = levels[d];
    up.resize(low.size() / 2);
    const bool sum = constraint.sum_step(d);
    for (std::size_t i = 0; i < up.size(); ++i)
      up[i] = sum ? Rational(low[2 * i] + low[2 * i + 1]) : std::max(low[2 * i], low[2 * i + 1]);
  }
  for (std::size_t d = 1; d <= n; ++d) {
    if (constraint.sum_step(d)) continue;
    for (std::size_t i = 0; i < levels[d].size(); ++i) levels[d][i] = levels[d - 1][i / 2];
  }

  LeafFold out;
  out.depth = n;
  out.assignment.constraint = constraint;
  for (std::size_t d = 0; d <= n; ++d)
    for (std::size_t i = 0; i < levels[d].size(); ++i)
      out.assignment.set(BitString::from_index(i, d), levels[d][i]);
  out.is_semimeasure = levels[0][0] <= 1;
  return out;
}

std::vector<Rational> pad_to_power_of_two(std::vector<Rational> leaves) {
  std::size_t n = 1;
  while (n < leaves.size()) n <<= 1;
  leaves.resize(n, Rational(0));
  return leaves;
}

}  // namespace asym
