#include "asym/bitstring.hpp"
#include "asym/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace asym {

BitString::BitString(std::string_view bits) : bits_(bits) {
  for (char c : bits_) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("not a bit string: \"" + std::string(bits) + "\"");
    }
  }
}

BitString BitString::zeros(std::size_t n) { return BitString(std::string(n, '0')); }

BitString BitString::child(int b) const {
  BitString out = *this;
  out.bits_.push_back(b ? '1' : '0');
  return out;
}

BitString BitString::parent() const {
  if (bits_.empty()) throw std::logic_error("root has no parent");
  return BitString(std::string_view(bits_).substr(0, bits_.size() - 1));
}

BitString BitString::sibling() const {
  if (bits_.empty()) throw std::logic_error("root has no sibling");
  BitString out = *this;
  out.bits_.back() = out.bits_.back() == '0' ? '1' : '0';
  return out;
}

BitString BitString::prefix(std::size_t n) const {
  return BitString(std::string_view(bits_).substr(0, n));
}

BitString BitString::suffix_from(std::size_t n) const {
  return BitString(std::string_view(bits_).substr(std::min(n, bits_.size())));
}

BitString BitString::operator+(const BitString& tail) const {
  BitString out = *this;
  out.bits_ += tail.bits_;
  return out;
}

bool BitString::starts_with(const BitString& head) const {
  return bits_.compare(0, head.bits_.size(), head.bits_) == 0 && head.size() <= size();
}

std::size_t BitString::index() const {
  std::size_t v = 0;
  for (char c : bits_) v = (v << 1) | static_cast<std::size_t>(c == '1');
  return v;
}

BitString BitString::from_index(std::size_t index, std::size_t length) {
  std::string s(length, '0');
  for (std::size_t i = 0; i < length; ++i) {
    if ((index >> (length - 1 - i)) & 1U) s[i] = '1';
  }
  return BitString(s);
}

// --- rational helpers -------------------------------------------------------

Rational make_rational(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational");
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t frac = s.size() - dot - 1;
    if (digits.empty() || digits == "-") throw std::invalid_argument("bad decimal: " + s);
    mpz_class num;
    if (num.set_str(digits, 10) != 0) throw std::invalid_argument("bad decimal: " + s);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }
std::string numerator_string(const Rational& r) { return r.get_num().get_str(); }
std::string denominator_string(const Rational& r) { return r.get_den().get_str(); }

Rational from_parts(std::string_view num, std::string_view den) {
  mpz_class n, d;
  if (n.set_str(std::string(num), 10) != 0) throw std::invalid_argument("bad numerator");
  if (d.set_str(std::string(den), 10) != 0) throw std::invalid_argument("bad denominator");
  if (d == 0) throw std::invalid_argument("zero denominator");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

Rational pow2(long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(std::labs(e)));
  return e >= 0 ? Rational(p) : Rational(mpz_class(1), p);
}

Rational pow(const Rational& base, unsigned long e) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), e);
  out.canonicalize();
  return out;
}

std::optional<Rational> exact_sqrt(const Rational& r) {
  if (r < 0) return std::nullopt;
  const mpz_class& n = r.get_num();
  const mpz_class& d = r.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) {
    return std::nullopt;
  }
  mpz_class sn, sd;
  mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
  Rational out(sn, sd);
  out.canonicalize();
  return out;
}

double to_double(const Rational& r) { return r.get_d(); }

}  // namespace asym
