#pragma once

#include "asym/interval.hpp"
#include "asym/json_io.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace asym {

/// Outcome of proving margin(x) >= 0 on [lo, hi] by bisection.
struct BoxProof {
  Certainty verdict = Certainty::Unknown;
  std::size_t boxes = 0;
  /// Smallest certified lower bound of the margin over accepted boxes.
  std::optional<Rational> min_margin;
  /// A point where the margin is certainly negative.
  std::optional<Rational> counterexample;
};

BoxProof prove_nonnegative(const std::function<Interval(const Interval&)>& margin, const Rational& lo,
                           const Rational& hi, std::size_t max_boxes);

struct InequalityResult {
  std::string name;
  std::string domain;
  BoxProof proof;
};

struct EpsilonCheck {
  Rational epsilon;
  bool certified = false;
  std::vector<InequalityResult> results;
};

/// Checks every inequality the upper-bound construction relies on, in its
/// unexpanded form, over its full parameter range. Throws for epsilon <= 0.
EpsilonCheck check_epsilon(const Rational& epsilon, std::size_t max_boxes = 200000);

struct EpsilonSearchConfig {
  Rational grid_step = make_rational(1, 2048);
  Rational max_epsilon = make_rational(1, 16);
  mpfr_prec_t precision = kDefaultPrecision;
  std::size_t max_boxes = 200000;
  unsigned threads = 0;  // 0 picks the hardware concurrency
};

struct EpsilonSearchResult {
  EpsilonSearchConfig config;
  std::vector<EpsilonCheck> grid;
  EpsilonCheck best;
  Interval alpha;
  Interval beta;
  bool beta_below_half = false;
  bool meets_target = false;
  Rational target_beta = make_rational(491, 1000);
  /// Epsilon at which alpha reaches 2^-target.
  Interval target_epsilon;
};

/// Largest certified grid point in (0, max_epsilon]. Throws std::runtime_error
/// when none certifies.
EpsilonSearchResult epsilon_search(const EpsilonSearchConfig& config);

Json epsilon_check_json(const EpsilonCheck& c);
Json epsilon_search_json(const EpsilonSearchResult& r, bool include_grid = false);

}  // namespace asym
