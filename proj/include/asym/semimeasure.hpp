#pragma once

#include "asym/bitstring.hpp"
#include "asym/rational.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace asym {

/// Says at which depths a tree of masses splits (sum rule) and at which it
/// copies its parent (copy rule). The child of a depth-(d-1) node sits at
/// depth d; an "i mod k" constraint splits exactly when d = i (mod k).
///
/// Odd is 1 mod 2, even is 2 mod 2. Modulus 1 is the ordinary semimeasure:
/// every depth splits.
class OnlineConstraint {
 public:
  static OnlineConstraint plain() { return OnlineConstraint(1, 1); }
  static OnlineConstraint odd() { return OnlineConstraint(2, 1); }
  static OnlineConstraint even() { return OnlineConstraint(2, 2); }
  /// residue in 1..modulus; throws std::invalid_argument otherwise.
  static OnlineConstraint modulo(int residue, int modulus);

  int modulus() const { return modulus_; }
  int residue() const { return residue_; }
  bool is_plain() const { return modulus_ == 1; }

  /// True when children at `depth` obey the sum rule.
  bool sum_step(std::size_t depth) const {
    return modulus_ == 1 || static_cast<int>(depth % static_cast<std::size_t>(modulus_)) ==
                                residue_ % modulus_;
  }

  /// The constraint seen by strings that start after `offset` fixed bits.
  OnlineConstraint shifted(std::size_t offset) const;

  /// Strip copy steps: the deepest ancestor-or-self whose own depth is a
  /// sum step (or the root). Its value is the value of `node`.
  BitString canonical(const BitString& node) const;

  std::string name() const;
  static OnlineConstraint parse(std::string_view name);

  bool operator==(const OnlineConstraint&) const = default;

 private:
  OnlineConstraint(int modulus, int residue) : modulus_(modulus), residue_(residue) {}
  int modulus_;
  int residue_;
};

/// Partial map from nodes to nonnegative rationals; absent nodes are 0.
class MassAssignment {
 public:
  using Map = std::map<BitString, Rational>;

  const Rational& get(const BitString& node) const;
  bool contains(const BitString& node) const { return entries_.count(node) != 0; }
  void set(const BitString& node, Rational value) { entries_[node] = std::move(value); }
  void erase(const BitString& node) { entries_.erase(node); }

  const Map& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t max_depth() const;

  bool operator==(const MassAssignment&) const = default;

 private:
  Map entries_;
};

/// A mass assignment read through an online constraint: a node that is not
/// stored and sits at a copy depth takes its parent's value.
struct OnlineMassAssignment {
  MassAssignment base;
  OnlineConstraint constraint = OnlineConstraint::plain();

  Rational value(const BitString& node) const;
  void set(const BitString& node, Rational v) { base.set(node, std::move(v)); }
  bool operator==(const OnlineMassAssignment&) const = default;
};

struct Violation {
  enum class Rule { Negative, RootAboveOne, SumRule, CopyRule, Decrease, CopyNodeUpdate, StepOrder };
  Rule rule;
  BitString node;
  std::string detail;
};

std::string rule_name(Violation::Rule rule);

/// Every populated node and its ancestor chain is checked. Violations are data.
std::vector<Violation> validate(const MassAssignment& assignment);
std::vector<Violation> validate(const OnlineMassAssignment& assignment);

/// Pointwise-least online assignment whose depth-n values dominate `leaves`
/// (2^n entries in lexicographic order). The full tree is materialized.
struct LeafFold {
  OnlineMassAssignment assignment;
  std::size_t depth = 0;
  bool is_semimeasure = false;  // root <= 1
  Rational root() const { return assignment.value(BitString()); }
};

/// Throws std::invalid_argument unless leaves.size() is a power of two.
LeafFold min_online_from_leaves(std::span<const Rational> leaves, OnlineConstraint constraint);

/// Appends zeros up to the next power of two.
std::vector<Rational> pad_to_power_of_two(std::vector<Rational> leaves);

bool is_power_of_two(std::size_t n);
std::size_t log2_exact(std::size_t n);

}  // namespace asym
