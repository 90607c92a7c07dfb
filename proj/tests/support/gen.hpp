#pragma once

#include "asym/semimeasure.hpp"
#include "asym/stream.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace asym::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on [0, n) by rejection, so results do not depend on the library.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do x = eng_(); while (x >= limit);
    return x % n;
  }
  long range(long lo, long hi) { return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1))); }
  bool coin() { return below(2) == 1; }
  // k/den with k uniform in [0, den].
  Rational grid(long den) { return make_rational(range(0, den), den); }
  // Uniform grid point in [0, cap].
  Rational upto(const Rational& cap, long den) { return cap * grid(den); }

 private:
  std::mt19937_64 eng_;
};

inline BitString random_bits(Rng& rng, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += rng.coin() ? '1' : '0';
  return BitString(s);
}

// Full plain semimeasure to `depth`: children take random shares of the parent.
inline MassAssignment random_semimeasure(Rng& rng, std::size_t depth, long den = 8) {
  MassAssignment p;
  p.set(BitString(), rng.coin() ? Rational(1) : rng.grid(den));
  for (std::size_t d = 0; d < depth; ++d)
    for (std::size_t i = 0; i < (std::size_t{1} << d); ++i) {
      const BitString x = BitString::from_index(i, d);
      const Rational v = p.get(x);
      const Rational a = rng.upto(v, den);
      const Rational b = rng.upto(v - a, den);
      p.set(x.child(0), a);
      p.set(x.child(1), b);
    }
  return p;
}

// Random strings built from the given blocks; updates concentrate on them.
inline std::vector<BitString> block_paths(Rng& rng, const std::vector<std::string>& blocks, std::size_t rounds,
                                          std::size_t count) {
  std::vector<BitString> out;
  for (std::size_t c = 0; c < count; ++c) {
    std::string s;
    for (std::size_t j = 0; j <= rounds; ++j) s += blocks[rng.below(blocks.size())];
    out.push_back(BitString(s));
  }
  return out;
}

// Valid streams for several machines sharing one clock. Every root starts at
// one; later updates raise canonical nodes on prefixes of `paths` (or their
// siblings) by a random share of the room the sum rule leaves.
inline std::vector<EnumerationStream> random_streams(Rng& rng, const std::vector<OnlineConstraint>& cs,
                                                     const std::vector<BitString>& paths, std::size_t updates,
                                                     long den = 4) {
  std::vector<EnumerationStream> out;
  std::vector<StreamState> states;
  long step = 0;
  for (const auto& c : cs) {
    out.push_back(EnumerationStream{c, {Update{0, BitString(), Rational(1)}}});
    states.emplace_back(c);
    states.back().apply(out.back().updates.back());
  }
  for (std::size_t n = 0; n < updates; ++n) {
    step += rng.range(0, 2);
    const std::size_t m = rng.below(cs.size());
    const OnlineConstraint& c = cs[m];
    const BitString& path = paths[rng.below(paths.size())];
    std::size_t d = 1 + rng.below(path.size());
    while (d > 0 && !c.sum_step(d)) --d;
    if (d == 0) continue;
    BitString node = path.prefix(d);
    if (rng.below(4) == 0) node = node.sibling();
    const Rational parent = states[m].value(node.parent());
    const Rational room = parent - states[m].value(node) - states[m].value(node.sibling());
    if (room <= 0) continue;
    const Rational v = states[m].value(node) + room * make_rational(rng.range(1, den), den);
    const Update u{step, node, v};
    if (states[m].apply(u)) continue;
    out[m].updates.push_back(u);
  }
  return out;
}

}  // namespace asym::testing
