#pragma once

// Finite binary strings in the canonical enumeration order
//   lambda, 0, 1, 00, 01, 10, 11, 000, ...
// together with the bijection s <-> 1s - 1 onto the naturals.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <string_view>

#include <boost/container/small_vector.hpp>
#include <gmpxx.h>

namespace ait {

class Dyadic;

using Natural = mpz_class;

/// A finite bit string. Bits are packed most-significant-first so that two
/// strings of equal length compare lexicographically by comparing words.
/// Up to 128 bits are stored inline.
class BitString {
 public:
  BitString() = default;

  /// Parses a sequence of '0'/'1' characters; the empty view is lambda.
  /// Throws std::invalid_argument on any other character.
  explicit BitString(std::string_view bits);

  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] bool empty() const noexcept { return size_ == 0; }

  [[nodiscard]] bool operator[](std::size_t i) const noexcept {
    return (words_[i / 64] >> (63 - i % 64)) & 1u;
  }

  void push_back(bool bit);
  void append(const BitString& other);
  void pop_back();

  [[nodiscard]] BitString prefix(std::size_t n) const;
  [[nodiscard]] bool is_prefix_of(const BitString& other) const noexcept;

  /// Serializes as ASCII '0'/'1'; lambda is the empty string.
  [[nodiscard]] std::string to_string() const;

  [[nodiscard]] std::size_t hash() const noexcept;

  friend bool operator==(const BitString& a, const BitString& b) noexcept;
  /// Length-then-lexicographic: the enumeration order of {0,1}*.
  friend std::strong_ordering operator<=>(const BitString& a, const BitString& b) noexcept;

 private:
  boost::container::small_vector<std::uint64_t, 2> words_;
  std::size_t size_ = 0;
};

/// Pure lexicographic order (a proper prefix sorts first). Used for prefix
/// checks, where it places each string next to its extensions.
bool lex_less(const BitString& a, const BitString& b) noexcept;

/// phi(s) = (1s as a binary numeral) - 1.
Natural index_of(const BitString& s);
/// Inverse of index_of.
BitString string_at(const Natural& n);
/// Fast path for strings shorter than 64 bits.
std::uint64_t index_of_u64(const BitString& s);
BitString string_at_u64(std::uint64_t n);
/// string_at(index_of(s) + 1) without arbitrary precision.
BitString successor(const BitString& s);

using StringSet = std::set<BitString>;

bool is_prefix_free(const StringSet& set);
/// Exact sum of 2^{-|s|}.
Dyadic kraft_sum(const StringSet& set);

}  // namespace ait

template <>
struct std::hash<ait::BitString> {
  std::size_t operator()(const ait::BitString& s) const noexcept { return s.hash(); }
};
