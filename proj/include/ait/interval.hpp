#pragma once

#include <iosfwd>
#include <string>

#include "ait/dyadic.hpp"

namespace ait {

/// Target number of fractional bits for enclosure widths.
struct Precision {
  unsigned bits = 64;

  /// Throws ValidationError when bits < 4.
  static Precision of(unsigned bits);
  [[nodiscard]] Precision plus(unsigned extra) const { return Precision{bits + extra}; }
};

/// Closed interval [lo, hi] with dyadic endpoints. Sums, differences and
/// products are exact; everything else rounds outward.
class Interval {
 public:
  Interval() = default;
  Interval(Dyadic point);  // NOLINT: a dyadic is a degenerate interval
  Interval(long point) : Interval(Dyadic(point)) {}  // NOLINT
  /// Throws DomainError when lo > hi.
  Interval(Dyadic lo, Dyadic hi);

  [[nodiscard]] const Dyadic& lo() const noexcept { return lo_; }
  [[nodiscard]] const Dyadic& hi() const noexcept { return hi_; }
  [[nodiscard]] Dyadic width() const { return hi_ - lo_; }
  [[nodiscard]] bool is_point() const { return lo_ == hi_; }

  [[nodiscard]] bool contains(const Dyadic& x) const { return lo_ <= x && x <= hi_; }
  [[nodiscard]] bool contains(const Interval& x) const { return lo_ <= x.lo_ && x.hi_ <= hi_; }
  [[nodiscard]] bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
  [[nodiscard]] bool overlaps(const Interval& x) const { return lo_ <= x.hi_ && x.lo_ <= hi_; }
  /// Every point strictly below / above every point of x.
  [[nodiscard]] bool certainly_less(const Interval& x) const { return hi_ < x.lo_; }
  [[nodiscard]] bool certainly_greater(const Interval& x) const { return lo_ > x.hi_; }

  /// Outward rounding of both endpoints to multiples of 2^{-frac_bits}.
  [[nodiscard]] Interval widened(std::int64_t frac_bits) const;

  [[nodiscard]] Interval hull(const Interval& x) const;

  /// "lo..hi" with `digits` fractional decimal digits, rounded outward.
  [[nodiscard]] std::string to_string(int digits = 12) const;

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a);
  Interval& operator+=(const Interval& b) { return *this = *this + b; }

  friend bool operator==(const Interval& a, const Interval& b) = default;

 private:
  Dyadic lo_;
  Dyadic hi_;
};

/// Outward-rounded quotient. Throws DomainError if b contains zero.
Interval divide(const Interval& a, const Interval& b, Precision prec);

/// Enclosure of a rational: a point when it is dyadic, otherwise the
/// outward rounding to 2^{-(prec.bits + 8)}.
Interval enclose(const Rational& q, Precision prec);

/// Number of decimal digits that shows a width of 2^{-bits}.
int decimal_digits(Precision prec);

std::ostream& operator<<(std::ostream& os, const Interval& x);

}  // namespace ait
