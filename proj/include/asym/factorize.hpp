#pragma once

#include "asym/semimeasure.hpp"

#include <utility>

namespace asym {

struct Factorization {
  OnlineMassAssignment odd;
  OnlineMassAssignment even;
};

/// Splits a semimeasure into odd and even online factors whose product is P
/// at every even-depth node. Every node up to `depth` is materialized in both
/// factors. Zero-mass branches get zero factors below them.
///
/// Throws std::invalid_argument if `depth` is odd or P is not a semimeasure.
Factorization factorize_computable(const MassAssignment& p, std::size_t depth);

}  // namespace asym
