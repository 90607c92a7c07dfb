#pragma once

#include "asym/bitstring.hpp"
#include "asym/interval.hpp"
#include "asym/rational.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace asym {

/// Key order follows insertion so serialized output is byte-stable.
using Json = nlohmann::ordered_json;

/// Rationals travel as "a/b" strings.
Json rational_json(const Rational& r);
Rational rational_from_json(const Json& j);

Json rationals_json(const std::vector<Rational>& values);

/// {"lo", "hi"} as exact rationals of the endpoints, plus short decimals.
Json interval_json(const Interval& x);

/// One compact record per line.
void write_jsonl(std::ostream& out, const std::vector<Json>& records);
std::vector<Json> read_jsonl(std::istream& in);

}  // namespace asym
