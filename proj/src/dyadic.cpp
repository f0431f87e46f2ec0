#include "ait/dyadic.hpp"

#include <cctype>
#include <cmath>
#include <ostream>

#include "ait/errors.hpp"

namespace ait {
namespace {

mpz_class shl(const mpz_class& x, std::uint64_t k) {
  mpz_class out;
  mpz_mul_2exp(out.get_mpz_t(), x.get_mpz_t(), k);
  return out;
}

mpz_class div_2exp(const mpz_class& x, std::uint64_t k, Rounding dir) {
  mpz_class out;
  if (dir == Rounding::down) {
    mpz_fdiv_q_2exp(out.get_mpz_t(), x.get_mpz_t(), k);
  } else {
    mpz_cdiv_q_2exp(out.get_mpz_t(), x.get_mpz_t(), k);
  }
  return out;
}

mpz_class div_round(const mpz_class& n, const mpz_class& d, Rounding dir) {
  mpz_class out;
  if (dir == Rounding::down) {
    mpz_fdiv_q(out.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  } else {
    mpz_cdiv_q(out.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  }
  return out;
}

mpz_class pow10(unsigned long k) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), 10, k);
  return out;
}

}  // namespace

Dyadic::Dyadic(long value) : num_(value), exp_(0) { canonicalize(); }

Dyadic::Dyadic(mpz_class numerator, std::int64_t exponent)
    : num_(std::move(numerator)), exp_(exponent) {
  canonicalize();
}

Dyadic Dyadic::pow2(std::int64_t e) { return Dyadic(mpz_class(1), e); }

void Dyadic::canonicalize() {
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  const auto tz = mpz_scan1(num_.get_mpz_t(), 0);
  if (tz > 0) {
    mpz_tdiv_q_2exp(num_.get_mpz_t(), num_.get_mpz_t(), tz);
    exp_ += static_cast<std::int64_t>(tz);
  }
}

Dyadic Dyadic::shifted(std::int64_t k) const {
  if (is_zero()) return *this;
  Dyadic out = *this;
  out.exp_ += k;
  return out;
}

Dyadic Dyadic::rounded(std::int64_t frac_bits, Rounding dir) const {
  if (is_zero() || exp_ >= -frac_bits) return *this;
  const auto shift = static_cast<std::uint64_t>(-frac_bits - exp_);
  return Dyadic(div_2exp(num_, shift, dir), -frac_bits);
}

std::int64_t Dyadic::magnitude() const {
  if (is_zero()) throw DomainError("magnitude of zero");
  return static_cast<std::int64_t>(mpz_sizeinbase(num_.get_mpz_t(), 2)) - 1 + exp_;
}

double Dyadic::to_double() const {
  long e = 0;
  const double m = mpz_get_d_2exp(&e, num_.get_mpz_t());
  return std::ldexp(m, static_cast<int>(e + exp_));
}

Rational Dyadic::to_rational() const {
  if (exp_ >= 0) return Rational(shl(num_, static_cast<std::uint64_t>(exp_)));
  Rational q(num_, shl(mpz_class(1), static_cast<std::uint64_t>(-exp_)));
  q.canonicalize();
  return q;
}

std::string Dyadic::to_string() const {
  if (exp_ >= 0) return shl(num_, static_cast<std::uint64_t>(exp_)).get_str();
  return num_.get_str() + "/" + shl(mpz_class(1), static_cast<std::uint64_t>(-exp_)).get_str();
}

std::string Dyadic::to_decimal(int digits, Rounding dir) const {
  mpz_class scaled = num_ * pow10(static_cast<unsigned long>(digits));
  if (exp_ >= 0) {
    scaled = shl(scaled, static_cast<std::uint64_t>(exp_));
  } else {
    scaled = div_2exp(scaled, static_cast<std::uint64_t>(-exp_), dir);
  }
  const bool negative = scaled < 0;
  std::string body = mpz_class(abs(scaled)).get_str();
  if (digits > 0) {
    if (body.size() <= static_cast<std::size_t>(digits)) {
      body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
    }
    body.insert(body.size() - static_cast<std::size_t>(digits), ".");
  }
  return negative ? "-" + body : body;
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const std::int64_t e = std::min(a.exp_, b.exp_);
  return Dyadic(shl(a.num_, static_cast<std::uint64_t>(a.exp_ - e)) +
                    shl(b.num_, static_cast<std::uint64_t>(b.exp_ - e)),
                e);
}

Dyadic operator-(const Dyadic& a) {
  Dyadic out = a;
  out.num_ = -out.num_;
  return out;
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
  return Dyadic(a.num_ * b.num_, a.exp_ + b.exp_);
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  const int sa = a.sign();
  const int sb = b.sign();
  if (sa != sb) return sa <=> sb;
  if (sa == 0) return std::strong_ordering::equal;
  const int s = (a - b).sign();
  return s <=> 0;
}

Dyadic divide(const Dyadic& a, const Dyadic& b, std::int64_t frac_bits, Rounding dir) {
  if (b.is_zero()) throw DomainError("division by zero");
  mpz_class n = a.numerator();
  mpz_class d = b.numerator();
  const std::int64_t s = a.exponent() - b.exponent() + frac_bits;
  if (s >= 0) {
    n = shl(n, static_cast<std::uint64_t>(s));
  } else {
    d = shl(d, static_cast<std::uint64_t>(-s));
  }
  return Dyadic(div_round(n, d, dir), -frac_bits);
}

std::optional<Dyadic> as_dyadic(const Rational& q) {
  const mpz_class& den = q.get_den();
  if (mpz_popcount(den.get_mpz_t()) != 1) return std::nullopt;
  const auto k = static_cast<std::int64_t>(mpz_sizeinbase(den.get_mpz_t(), 2)) - 1;
  return Dyadic(q.get_num(), -k);
}

Dyadic round_rational(const Rational& q, std::int64_t frac_bits, Rounding dir) {
  if (frac_bits >= 0) {
    return Dyadic(div_round(shl(q.get_num(), static_cast<std::uint64_t>(frac_bits)), q.get_den(), dir),
                  -frac_bits);
  }
  return Dyadic(div_round(q.get_num(), shl(q.get_den(), static_cast<std::uint64_t>(-frac_bits)), dir),
                -frac_bits);
}

Rational parse_rational(std::string_view text) {
  auto fail = [&]() -> ValidationError {
    return ValidationError("not an exact numeric literal: \"" + std::string(text) + "\"");
  };
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto digits = [&](std::string& out) {
    const std::size_t start = i;
    while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) out.push_back(text[i++]);
    return i > start;
  };
  bool negative = false;
  if (i < n && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
  std::string whole;
  std::string frac;
  const bool has_whole = digits(whole);
  Rational value;
  if (i < n && text[i] == '/') {
    ++i;
    std::string den;
    if (!has_whole || !digits(den) || i != n) throw fail();
    const mpz_class d(den, 10);
    if (d == 0) throw ValidationError("zero denominator in \"" + std::string(text) + "\"");
    value = Rational(mpz_class(whole, 10), d);
    value.canonicalize();
  } else {
    bool has_frac = false;
    if (i < n && text[i] == '.') {
      ++i;
      has_frac = digits(frac);
    }
    if (!has_whole && !has_frac) throw fail();
    long exponent = 0;
    if (i < n && (text[i] == 'e' || text[i] == 'E')) {
      ++i;
      bool eneg = false;
      if (i < n && (text[i] == '+' || text[i] == '-')) eneg = text[i++] == '-';
      std::string ed;
      if (!digits(ed) || ed.size() > 6) throw fail();
      exponent = std::stol(ed) * (eneg ? -1 : 1);
    }
    if (i != n) throw fail();
    const mpz_class mant((whole.empty() ? "0" : whole) + frac, 10);
    exponent -= static_cast<long>(frac.size());
    if (exponent >= 0) {
      value = Rational(mant * pow10(static_cast<unsigned long>(exponent)));
    } else {
      value = Rational(mant, pow10(static_cast<unsigned long>(-exponent)));
      value.canonicalize();
    }
  }
  return negative ? Rational(-value) : value;
}

std::ostream& operator<<(std::ostream& os, const Dyadic& d) { return os << d.to_string(); }

}  // namespace ait
