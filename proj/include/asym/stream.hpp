#pragma once

#include "asym/json_io.hpp"
#include "asym/semimeasure.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace asym {

/// One monotone increase: at `step` the value at `node` becomes `value`.
struct Update {
  long step = 0;
  BitString node;
  Rational value;
  bool operator==(const Update&) const = default;
};

/// A finite enumeration from below. Only nodes whose own depth is a sum step
/// (or the root) are written; copy-depth nodes follow their parent.
struct EnumerationStream {
  OnlineConstraint constraint = OnlineConstraint::plain();
  std::vector<Update> updates;
};

/// Incrementally checked state of a stream prefix.
class StreamState {
 public:
  explicit StreamState(OnlineConstraint constraint) { current_.constraint = constraint; }

  /// Applies the batch atomically: on a violation nothing changes.
  std::optional<Violation> apply(std::span<const Update> batch);
  std::optional<Violation> apply(const Update& u) { return apply(std::span<const Update>(&u, 1)); }

  Rational value(const BitString& node) const { return current_.value(node); }
  const OnlineMassAssignment& assignment() const { return current_; }
  const OnlineConstraint& constraint() const { return current_.constraint; }
  long last_step() const { return last_step_; }

 private:
  OnlineMassAssignment current_;
  long last_step_ = -1;
};

class StreamError : public std::runtime_error {
 public:
  StreamError(std::size_t index, Violation v);
  std::size_t index;
  Violation violation;
};

/// Index and violation of the first update that breaks the stream, if any.
std::optional<std::pair<std::size_t, Violation>> first_violation(const EnumerationStream& stream);

/// Final assignment. Throws StreamError on an invalid stream.
OnlineMassAssignment replay(const EnumerationStream& stream);

/// Value of every node at every time, for queries by step.
class StreamHistory {
 public:
  StreamHistory() = default;
  /// Throws StreamError on an invalid stream.
  explicit StreamHistory(const EnumerationStream& stream);

  const OnlineConstraint& constraint() const { return constraint_; }
  /// Value after all updates with step <= t.
  Rational value_at(const BitString& node, long t) const;
  Rational final_value(const BitString& node) const;
  /// Steps at which the value of `node` changes, ascending.
  std::vector<long> change_steps(const BitString& node) const;

 private:
  OnlineConstraint constraint_ = OnlineConstraint::plain();
  std::map<BitString, std::vector<std::pair<long, Rational>>> history_;
};

Json update_json(const Update& u);
Update update_from_json(const Json& j);

/// JSON lines, one update per line. An optional leading {"constraint": ...}
/// record names the constraint.
void write_stream(std::ostream& out, const EnumerationStream& stream, bool with_header = true);
/// Parses records without validating the stream.
EnumerationStream parse_stream(const std::vector<Json>& records, OnlineConstraint fallback = OnlineConstraint::plain());
/// Revalidates the whole stream; throws StreamError or std::invalid_argument.
EnumerationStream read_stream(std::istream& in, OnlineConstraint fallback = OnlineConstraint::plain());

}  // namespace asym
