#include "ait/sdvm.hpp"

#include <algorithm>

namespace ait::sdvm {
namespace {

Rational pow_rational(const Rational& base, unsigned long e) {
  mpz_class num;
  mpz_class den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  Rational out(num, den);
  out.canonicalize();
  return out;
}

Rational quarter_pow(std::uint64_t e) { return pow_rational(Rational(1, 4), e); }

bool is_square(const BitString& s, std::size_t k) {
  if (k == 0 || k % 2 != 0) return false;
  const std::size_t h = k / 2;
  for (std::size_t i = 0; i < h; ++i) {
    if (s[i] != s[h + i]) return false;
  }
  return true;
}

}  // namespace

std::vector<mpz_class> canonical_counts(const BitString& s) {
  // rows[k] = counts for the prefix of length k
  std::vector<std::vector<mpz_class>> rows(s.size() + 1);
  rows[0] = {1};
  for (std::size_t k = 1; k <= s.size(); ++k) {
    auto& row = rows[k];
    row.assign(k + 1, 0);
    const auto& prev = rows[k - 1];
    for (std::size_t l = 0; l < prev.size(); ++l) row[l + 1] += prev[l];
    if (is_square(s, k)) {
      const auto& half = rows[k / 2];
      for (std::size_t l = 0; l < half.size(); ++l) row[l + 1] += half[l];
    }
  }
  return rows.back();
}

Rational exact_p(const BitString& s) {
  const auto counts = canonical_counts(s);
  Rational total = 0;
  for (std::size_t l = 0; l < counts.size(); ++l) {
    if (counts[l] != 0) total += Rational(counts[l]) * quarter_pow(l);
  }
  total /= 3;
  return total;
}

std::uint64_t exact_k(const BitString& s) {
  const auto counts = canonical_counts(s);
  const auto it = std::find_if(counts.begin(), counts.end(), [](const mpz_class& c) { return c != 0; });
  return 2 * static_cast<std::uint64_t>(it - counts.begin()) + 2;
}

Rational missing_mass(const BitString& s, std::uint64_t stage) {
  // DUP^a w HALT with m = a + l is found iff 2m + 2 <= stage and
  // m + 1 + |s| <= stage, i.e. m < J.
  const std::uint64_t by_len = stage / 2;
  const std::uint64_t by_steps = stage > s.size() ? stage - s.size() : 0;
  const std::uint64_t J = std::min(by_len, by_steps);
  const auto counts = canonical_counts(s);
  Rational total = 0;
  for (std::size_t l = 0; l < counts.size(); ++l) {
    if (counts[l] == 0) continue;
    // sum_{m >= max(l, J)} 4^{-(m+1)}
    total += Rational(counts[l]) * quarter_pow(std::max<std::uint64_t>(l, J) + 1) * Rational(4, 3);
  }
  return total;
}

Rational omega_upto(unsigned k) { return 1 - pow_rational(Rational(3, 4), k + 1); }

Rational length_weighted_upto(unsigned k) {
  Rational total = 0;
  for (unsigned j = 0; j <= k; ++j) {
    total += Rational(2 * j + 2) * pow_rational(Rational(3), j) * quarter_pow(j + 1);
  }
  return total;
}

}  // namespace ait::sdvm
