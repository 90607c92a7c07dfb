#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

namespace asym {

/// A finite binary string addressing a node of the full binary tree. The
/// empty string is the root.
class BitString {
 public:
  BitString() = default;
  /// Throws std::invalid_argument unless every character is '0' or '1'.
  explicit BitString(std::string_view bits);

  static BitString zeros(std::size_t n);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  int bit(std::size_t i) const { return bits_[i] == '1'; }
  const std::string& str() const { return bits_; }

  BitString child(int b) const;
  BitString parent() const;
  BitString sibling() const;
  BitString prefix(std::size_t n) const;
  BitString suffix_from(std::size_t n) const;
  BitString operator+(const BitString& tail) const;
  bool starts_with(const BitString& head) const;

  /// Position in lexicographic order among strings of the same length.
  std::size_t index() const;
  static BitString from_index(std::size_t index, std::size_t length);

  auto operator<=>(const BitString& other) const {
    if (auto c = bits_.size() <=> other.bits_.size(); c != 0) return c;
    return bits_ <=> other.bits_;
  }
  bool operator==(const BitString& other) const = default;

 private:
  std::string bits_;
};

inline BitString operator""_bits(const char* s, std::size_t n) {
  return BitString(std::string_view(s, n));
}

}  // namespace asym

template <>
struct std::hash<asym::BitString> {
  std::size_t operator()(const asym::BitString& b) const noexcept {
    return std::hash<std::string>{}(b.str());
  }
};
