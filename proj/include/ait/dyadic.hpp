#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace ait {

using Rational = mpq_class;

enum class Rounding { down, up };

/// Exact binary rational numerator * 2^exponent. Kept canonical: the
/// numerator is odd, or zero with exponent 0. All ring operations and
/// comparisons are exact.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(long value);  // NOLINT: integers convert implicitly
  Dyadic(mpz_class numerator, std::int64_t exponent);

  /// 2^e.
  static Dyadic pow2(std::int64_t e);

  [[nodiscard]] const mpz_class& numerator() const noexcept { return num_; }
  [[nodiscard]] std::int64_t exponent() const noexcept { return exp_; }

  [[nodiscard]] int sign() const noexcept { return sgn(num_); }
  [[nodiscard]] bool is_zero() const noexcept { return num_ == 0; }
  [[nodiscard]] bool is_integer() const noexcept { return exp_ >= 0; }

  /// Multiplication by 2^k (exact).
  [[nodiscard]] Dyadic shifted(std::int64_t k) const;

  /// Rounds to a multiple of 2^{-frac_bits} in the given direction.
  [[nodiscard]] Dyadic rounded(std::int64_t frac_bits, Rounding dir) const;

  /// floor(log2 |x|) for nonzero x.
  [[nodiscard]] std::int64_t magnitude() const;

  [[nodiscard]] double to_double() const;
  [[nodiscard]] Rational to_rational() const;

  /// Exact text: "5/16", "-3", "0".
  [[nodiscard]] std::string to_string() const;
  /// Decimal with `digits` fractional digits, rounded in the given direction.
  [[nodiscard]] std::string to_decimal(int digits, Rounding dir) const;

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a);
  Dyadic& operator+=(const Dyadic& b) { return *this = *this + b; }
  Dyadic& operator-=(const Dyadic& b) { return *this = *this - b; }
  Dyadic& operator*=(const Dyadic& b) { return *this = *this * b; }

  friend bool operator==(const Dyadic& a, const Dyadic& b) noexcept {
    return a.exp_ == b.exp_ && a.num_ == b.num_;
  }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

 private:
  void canonicalize();

  mpz_class num_{0};
  std::int64_t exp_ = 0;
};

/// a / b rounded to a multiple of 2^{-frac_bits}. Throws DomainError if b = 0.
Dyadic divide(const Dyadic& a, const Dyadic& b, std::int64_t frac_bits, Rounding dir);

/// The dyadic value of q when its reduced denominator is a power of two.
std::optional<Dyadic> as_dyadic(const Rational& q);

/// Rounds a rational to a multiple of 2^{-frac_bits}.
Dyadic round_rational(const Rational& q, std::int64_t frac_bits, Rounding dir);

/// Parses integers, "a/b" fractions and decimal literals ("0.25", "-1.5e-3")
/// exactly. Throws ValidationError on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

std::ostream& operator<<(std::ostream& os, const Dyadic& d);

}  // namespace ait
