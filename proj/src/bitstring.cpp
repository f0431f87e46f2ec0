#include "ait/bitstring.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "ait/dyadic.hpp"

namespace ait {

BitString::BitString(std::string_view bits) {
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("bit string may only contain '0' and '1': \"" +
                                  std::string(bits) + "\"");
    }
    push_back(c == '1');
  }
}

void BitString::push_back(bool bit) {
  if (size_ % 64 == 0) words_.push_back(0);
  if (bit) words_.back() |= std::uint64_t{1} << (63 - size_ % 64);
  ++size_;
}

void BitString::append(const BitString& other) {
  // Copying from `other` by index stays correct when other aliases *this.
  const std::size_t n = other.size_;
  words_.reserve((size_ + n + 63) / 64);
  for (std::size_t i = 0; i < n; ++i) push_back(other[i]);
}

void BitString::pop_back() {
  --size_;
  const std::size_t r = size_ % 64;
  if (r == 0) {
    words_.pop_back();
  } else {
    words_.back() &= ~std::uint64_t{0} << (64 - r);
  }
}

BitString BitString::prefix(std::size_t n) const {
  BitString out;
  n = std::min(n, size_);
  const std::size_t full = n / 64;
  out.words_.assign(words_.begin(), words_.begin() + static_cast<std::ptrdiff_t>(full));
  if (n % 64 != 0) out.words_.push_back(words_[full] & (~std::uint64_t{0} << (64 - n % 64)));
  out.size_ = n;
  return out;
}

bool BitString::is_prefix_of(const BitString& other) const noexcept {
  if (size_ > other.size_) return false;
  const std::size_t full = size_ / 64;
  for (std::size_t w = 0; w < full; ++w) {
    if (words_[w] != other.words_[w]) return false;
  }
  const std::size_t r = size_ % 64;
  if (r == 0) return true;
  const std::uint64_t mask = ~std::uint64_t{0} << (64 - r);
  return (other.words_[full] & mask) == words_[full];
}

std::string BitString::to_string() const {
  std::string out(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if ((*this)[i]) out[i] = '1';
  }
  return out;
}

std::size_t BitString::hash() const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ull ^ size_;
  for (std::uint64_t w : words_) {
    h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

bool operator==(const BitString& a, const BitString& b) noexcept {
  return a.size_ == b.size_ && std::equal(a.words_.begin(), a.words_.end(), b.words_.begin());
}

std::strong_ordering operator<=>(const BitString& a, const BitString& b) noexcept {
  if (auto c = a.size_ <=> b.size_; c != 0) return c;
  for (std::size_t w = 0; w < a.words_.size(); ++w) {
    if (auto c = a.words_[w] <=> b.words_[w]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

bool lex_less(const BitString& a, const BitString& b) noexcept {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] != b[i]) return b[i];
  }
  return a.size() < b.size();
}

Natural index_of(const BitString& s) {
  Natural v = 1;
  for (std::size_t i = 0; i < s.size(); ++i) {
    v <<= 1;
    if (s[i]) v += 1;
  }
  return v - 1;
}

BitString string_at(const Natural& n) {
  if (n < 0) throw std::invalid_argument("string_at: negative index");
  const Natural v = n + 1;
  const std::size_t len = mpz_sizeinbase(v.get_mpz_t(), 2) - 1;
  BitString out;
  for (std::size_t i = len; i-- > 0;) out.push_back(mpz_tstbit(v.get_mpz_t(), i) != 0);
  return out;
}

std::uint64_t index_of_u64(const BitString& s) {
  if (s.size() >= 64) throw std::overflow_error("index_of_u64: string longer than 63 bits");
  std::uint64_t v = 1;
  for (std::size_t i = 0; i < s.size(); ++i) v = (v << 1) | (s[i] ? 1u : 0u);
  return v - 1;
}

BitString string_at_u64(std::uint64_t n) {
  if (n == ~std::uint64_t{0}) return string_at(Natural(static_cast<unsigned long>(n)));
  const std::uint64_t v = n + 1;
  const int len = 63 - __builtin_clzll(v);
  BitString out;
  for (int i = len; i-- > 0;) out.push_back((v >> i) & 1u);
  return out;
}

BitString successor(const BitString& s) {
  BitString out = s;
  std::size_t trailing_ones = 0;
  while (trailing_ones < out.size() && out[out.size() - 1 - trailing_ones]) ++trailing_ones;
  if (trailing_ones == out.size()) {
    return BitString(std::string(s.size() + 1, '0'));
  }
  for (std::size_t i = 0; i < trailing_ones; ++i) out.pop_back();
  out.pop_back();
  out.push_back(true);
  for (std::size_t i = 0; i < trailing_ones; ++i) out.push_back(false);
  return out;
}

bool is_prefix_free(const StringSet& set) {
  std::vector<BitString> sorted(set.begin(), set.end());
  std::sort(sorted.begin(), sorted.end(), lex_less);
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i - 1].is_prefix_of(sorted[i])) return false;
  }
  return true;
}

Dyadic kraft_sum(const StringSet& set) {
  Dyadic total;
  for (const auto& s : set) total += Dyadic::pow2(-static_cast<std::int64_t>(s.size()));
  return total;
}

}  // namespace ait
