#include "asym/json_io.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

namespace asym {

Json rational_json(const Rational& r) { return to_string(r); }

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_object() && j.contains("num") && j.contains("den"))
    return from_parts(j.at("num").get<std::string>(), j.at("den").get<std::string>());
  throw std::invalid_argument("not a rational: " + j.dump());
}

Json rationals_json(const std::vector<Rational>& values) {
  Json arr = Json::array();
  for (const auto& v : values) arr.push_back(rational_json(v));
  return arr;
}

void write_jsonl(std::ostream& out, const std::vector<Json>& records) {
  for (const auto& r : records) out << r.dump() << '\n';
}

std::vector<Json> read_jsonl(std::istream& in) {
  std::vector<Json> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(Json::parse(line));
    } catch (const nlohmann::json::parse_error& e) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

Json interval_json(const Interval& x) {
  Json j;
  j["lo"] = to_string(x.lower());
  j["hi"] = to_string(x.upper());
  j["rounding"] = "outward";
  j["approx"] = Json::array({x.lo_string(12), x.hi_string(12)});
  return j;
}

}  // namespace asym
