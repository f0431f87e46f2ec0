#include "ait/interval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <ostream>

#include "ait/errors.hpp"

namespace ait {

Precision Precision::of(unsigned bits) {
  if (bits < 4) throw ValidationError("precision must be at least 4 bits");
  return Precision{bits};
}

Interval::Interval(Dyadic point) : lo_(point), hi_(std::move(point)) {}

Interval::Interval(Dyadic lo, Dyadic hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (hi_ < lo_) throw DomainError("interval with lo > hi: " + lo_.to_string() + " > " + hi_.to_string());
}

Interval Interval::widened(std::int64_t frac_bits) const {
  return Interval(lo_.rounded(frac_bits, Rounding::down), hi_.rounded(frac_bits, Rounding::up));
}

Interval Interval::hull(const Interval& x) const {
  return Interval(std::min(lo_, x.lo_), std::max(hi_, x.hi_));
}

std::string Interval::to_string(int digits) const {
  return lo_.to_decimal(digits, Rounding::down) + ".." + hi_.to_decimal(digits, Rounding::up);
}

Interval operator+(const Interval& a, const Interval& b) { return Interval(a.lo_ + b.lo_, a.hi_ + b.hi_); }

Interval operator-(const Interval& a, const Interval& b) { return Interval(a.lo_ - b.hi_, a.hi_ - b.lo_); }

Interval operator-(const Interval& a) { return Interval(-a.hi_, -a.lo_); }

Interval operator*(const Interval& a, const Interval& b) {
  if (a.lo_.sign() >= 0 && b.lo_.sign() >= 0) return Interval(a.lo_ * b.lo_, a.hi_ * b.hi_);
  const std::array<Dyadic, 4> p{a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
  const auto [mn, mx] = std::minmax_element(p.begin(), p.end());
  return Interval(*mn, *mx);
}

Interval divide(const Interval& a, const Interval& b, Precision prec) {
  if (b.contains_zero()) throw DomainError("interval division by an interval containing zero");
  if (b.is_point() && abs(b.lo().numerator()) == 1) {
    const Dyadic inverse = Dyadic(b.lo().numerator(), -b.lo().exponent());
    return a * Interval(inverse);
  }
  const std::int64_t frac = static_cast<std::int64_t>(prec.bits) + 8;
  const std::array<const Dyadic*, 2> as{&a.lo(), &a.hi()};
  const std::array<const Dyadic*, 2> bs{&b.lo(), &b.hi()};
  std::optional<Dyadic> lo;
  std::optional<Dyadic> hi;
  for (const Dyadic* x : as) {
    for (const Dyadic* y : bs) {
      Dyadic d = divide(*x, *y, frac, Rounding::down);
      Dyadic u = divide(*x, *y, frac, Rounding::up);
      if (!lo || d < *lo) lo = std::move(d);
      if (!hi || u > *hi) hi = std::move(u);
    }
  }
  return Interval(*lo, *hi);
}

Interval enclose(const Rational& q, Precision prec) {
  if (auto d = as_dyadic(q)) return Interval(*d);
  const std::int64_t frac = static_cast<std::int64_t>(prec.bits) + 8;
  return Interval(round_rational(q, frac, Rounding::down), round_rational(q, frac, Rounding::up));
}

int decimal_digits(Precision prec) {
  return static_cast<int>(std::ceil(prec.bits * std::log10(2.0))) + 1;
}

std::ostream& operator<<(std::ostream& os, const Interval& x) { return os << x.to_string(); }

}  // namespace ait
