#pragma once

#include "asym/stream.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace asym {

/// The conditional enumeration of y given a fixed x of length m.
struct Conditional {
  EnumerationStream stream;
  std::optional<long> frozen_at;  // step of the update that pushed joint(x) past 2^-k
};

struct ConditionalFamily {
  std::size_t m = 0;
  long k = 0;
  std::map<BitString, Conditional> by_condition;
};

/// Emits joint(xy)·2^k for every x of length m until joint(x) exceeds 2^-k,
/// after which the conditional for x keeps its last values. The conditional
/// constraint is the joint constraint shifted by m.
///
/// Requires m == 0 or a sum step at depth m; throws std::invalid_argument
/// otherwise, and StreamError on an invalid joint stream.
ConditionalFamily chain_combine_forward(const EnumerationStream& joint, std::size_t m, long k);

using ConditionalStreams = std::map<std::pair<BitString, long>, EnumerationStream>;

struct BackwardResult {
  EnumerationStream output;
  long k_max = 0;
  Rational truncation_bound;  // mass the omitted terms k > k_max could add at depth m
};

/// Below depth m the output follows the marginal; from depth m on it is
/// the sum over k <= k_max with 2^-k <= marginal(x) of 2^(-k-1)·C(y|x,k).
/// Inputs are merged by step; ties go to the marginal, then to (x,k) order.
BackwardResult chain_combine_backward(const EnumerationStream& marginal, const ConditionalStreams& conditionals,
                                      std::size_t m, long k_max = 64);

/// Nodes xy where output(xy) < marginal(x)·C(y|x,k*)/4 at the final state,
/// with k* = ceil(-log2 marginal(x)). Terms with k* > k_max are skipped.
std::vector<BitString> backward_bound_failures(const EnumerationStream& marginal,
                                               const ConditionalStreams& conditionals, std::size_t m,
                                               const EnumerationStream& output, long k_max = 64);

/// Smallest k >= 0 with 2^-k <= v, for 0 < v <= 1.
long ceil_neg_log2(const Rational& v);

}  // namespace asym
