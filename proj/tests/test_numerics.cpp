#include <catch2/catch_amalgamated.hpp>

#include "ait/errors.hpp"
#include "ait/interval.hpp"
#include "ait/numerics.hpp"
#include "oracles.hpp"

using ait::Dyadic;
using ait::Interval;
using ait::Precision;
using ait::Rational;
using oracle::Real;

namespace {

const Precision P64 = Precision::of(64);

Interval pt(long num, int exp2 = 0) { return Interval(Dyadic(mpz_class(num), exp2)); }

ait::IntervalFunction kernel(long q) {
  return [q](const Interval& x, Precision p) { return ait::tsallis_kernel_F(x, Interval(q), p); };
}

Real r(const Rational& q) { return Real(q.get_num().get_str()) / Real(q.get_den().get_str()); }

// Enclosure of an oracle real on a 2^-bits grid.
Interval around(const Real& v, int bits) {
  const Real scaled = ldexp(v, bits);
  const auto lo = static_cast<oracle::BigInt>(floor(scaled)) - 1;
  const auto hi = static_cast<oracle::BigInt>(ceil(scaled)) + 1;
  return Interval(Dyadic(mpz_class(lo.str()), -bits), Dyadic(mpz_class(hi.str()), -bits));
}

}  // namespace

TEST_CASE("interval_pow examples", "[numerics]") {
  const Interval a = ait::interval_pow(pt(1, -1), pt(2), P64);
  CHECK(a == pt(1, -2));
  CHECK(a.width().is_zero());

  const Interval b = ait::interval_pow(pt(1, -4), pt(1, -1), P64);
  CHECK(b.contains(Dyadic(1, -2)));
  CHECK(b.width() <= Dyadic::pow2(-64));

  const Interval c = ait::interval_pow(pt(1, -1), pt(3, -1), P64);
  CHECK(oracle::encloses(c, pow(Real(0.5), Real(1.5))));
  CHECK(c.width() <= Dyadic::pow2(-64));
  CHECK(c.to_string(8) == "0.35355339..0.35355340");

  CHECK(ait::interval_pow(pt(0), pt(3, -1), P64) == pt(0));
  CHECK_THROWS_AS(ait::interval_pow(Interval(Dyadic(-1), Dyadic(1)), pt(2), P64), ait::DomainError);
  CHECK_THROWS_AS(ait::interval_pow(pt(0), pt(-1), P64), ait::DivergenceError);
}

TEST_CASE("interval_ln examples", "[numerics]") {
  CHECK(ait::interval_ln(pt(1), P64) == pt(0));
  const Interval ln2 = ait::interval_ln(pt(2), P64);
  CHECK(oracle::encloses(ln2, log(Real(2))));
  CHECK(ln2.to_string(10) == "0.6931471805..0.6931471806");
  const Interval lq = ait::interval_ln(pt(1, -2), P64);
  CHECK(oracle::encloses(lq, -2 * log(Real(2))));
  // consistent with -2 ln 2 from the previous enclosure
  CHECK(lq.overlaps(Interval(-2) * ln2));
  CHECK_THROWS_AS(ait::interval_ln(pt(0), P64), ait::DomainError);
}

TEST_CASE("interval_log2 is exact at powers of two", "[numerics]") {
  CHECK(ait::interval_log2(pt(1, -5), P64) == pt(-5));
  CHECK(oracle::encloses(ait::interval_log2(pt(3), P64), log(Real(3)) / log(Real(2))));
}

TEST_CASE("Tsallis kernel examples", "[numerics]") {
  CHECK(ait::tsallis_kernel_F(pt(1, -1), pt(2), P64) == pt(1, -2));
  CHECK(ait::tsallis_kernel_F(pt(1), pt(2), P64) == pt(0));

  const Real x = 1 / sqrt(Real(3));
  const Interval fx = ait::tsallis_kernel_F(around(x, 90), pt(3), P64);
  CHECK(oracle::encloses(fx, pow(Real(3), Real(-1.5))));
  CHECK(fx.to_string(9) == "0.192450089..0.192450090");

  CHECK_THROWS_AS(ait::tsallis_kernel_F(pt(3, -1), pt(2), P64), ait::DomainError);
  CHECK_THROWS_AS(ait::tsallis_kernel_F(pt(1, -1), pt(1), P64), ait::DomainError);
}

TEST_CASE("bisection examples", "[numerics]") {
  const Real s2 = sqrt(Real(2));
  const Interval right = ait::bisect_monotone(kernel(2), pt(1, -3), Interval(Dyadic(1, -1), Dyadic(1)),
                                              ait::Monotone::decreasing, P64);
  CHECK(oracle::encloses(right, (2 + s2) / 4));
  CHECK(right.width() <= Dyadic::pow2(-64));

  const Interval left = ait::bisect_monotone(kernel(2), pt(1, -3), Interval(Dyadic(0), Dyadic(1, -1)),
                                             ait::Monotone::increasing, P64);
  CHECK(oracle::encloses(left, (2 - s2) / 4));
  CHECK(left.width() <= Dyadic::pow2(-64));

  // The maximum 1/4 sits at x = 1/2; each monotone half finds it exactly.
  const Interval up = ait::bisect_monotone(kernel(2), pt(1, -2), Interval(Dyadic(1, -2), Dyadic(1, -1)),
                                           ait::Monotone::increasing, P64);
  const Interval down = ait::bisect_monotone(kernel(2), pt(1, -2), Interval(Dyadic(1, -1), Dyadic(3, -2)),
                                             ait::Monotone::decreasing, P64);
  CHECK(up.contains(Dyadic(1, -1)));
  CHECK(down.contains(Dyadic(1, -1)));
  CHECK(up.width() <= Dyadic::pow2(-64));
  // Across the maximum the endpoint values no longer straddle the target.
  CHECK_THROWS_AS(ait::bisect_monotone(kernel(2), pt(1, -2), Interval(Dyadic(1, -2), Dyadic(3, -2)),
                                       ait::Monotone::decreasing, P64),
                  ait::BracketError);
  CHECK_THROWS_AS(ait::bisect_monotone(kernel(2), pt(1, -1), Interval(Dyadic(1, -1), Dyadic(1)),
                                       ait::Monotone::decreasing, P64),
                  ait::BracketError);
}

TEST_CASE("bisection with an interval target returns the hull of both roots", "[numerics]") {
  const Interval t(Dyadic(1, -3), Dyadic(3, -4));
  const Interval x = ait::bisect_monotone(kernel(2), t, Interval(Dyadic(1, -1), Dyadic(1)),
                                          ait::Monotone::decreasing, P64);
  CHECK(oracle::encloses(x, (2 + sqrt(Real(2))) / 4));
  CHECK(oracle::encloses(x, (1 + sqrt(Real(1) / 4)) / 2));
}

TEST_CASE("property: enclosures contain the high-precision oracle", "[numerics][property]") {
  oracle::Gen g(21);
  for (int i = 0; i < 10000; ++i) {
    // x in (0, 4], q a rational with small numerator and denominator
    const Dyadic xd = (g.unit_dyadic(20) + Dyadic(1, -20)).shifted(static_cast<std::int64_t>(g.below(3)));
    Rational q(static_cast<long>(g.below(40)) - 10, static_cast<long>(1 + g.below(12)));
    q.canonicalize();
    const Interval x(xd);
    const Precision prec = Precision::of(32 + static_cast<unsigned>(g.below(97)));
    const Real xr = oracle::to_real(xd);

    const Interval qe = ait::enclose(q, prec);
    const Interval pw = ait::interval_pow(x, qe, prec);
    REQUIRE(oracle::encloses(pw, pow(xr, r(q))));
    REQUIRE(oracle::encloses(ait::interval_ln(x, prec), log(xr)));
    REQUIRE(oracle::encloses(ait::interval_log2(x, prec), log(xr) / log(Real(2))));

    if (xd <= Dyadic(1) && q > 0 && q != 1) {
      const Interval f = ait::tsallis_kernel_F(x, qe, prec);
      REQUIRE(oracle::encloses(f, (xr - pow(xr, r(q))) / (r(q) - 1)));
    }
  }
}

TEST_CASE("property: doubling precision never widens", "[numerics][property]") {
  oracle::Gen g(22);
  for (int i = 0; i < 2000; ++i) {
    const Interval x(g.unit_dyadic(30) + Dyadic(1, -31));
    const Interval q(Dyadic(mpz_class(static_cast<unsigned long>(1 + g.below(63))), -4));
    const unsigned b = 16 + static_cast<unsigned>(g.below(80));
    const Precision p1 = Precision::of(b);
    const Precision p2 = Precision::of(2 * b);
    REQUIRE(ait::interval_pow(x, q, p2).width() <= ait::interval_pow(x, q, p1).width());
    REQUIRE(ait::interval_ln(x, p2).width() <= ait::interval_ln(x, p1).width());
    if (!(q == Interval(1))) {
      REQUIRE(ait::tsallis_kernel_F(x, q, p2).width() <= ait::tsallis_kernel_F(x, q, p1).width());
    }
  }
}

TEST_CASE("property: kernel identities", "[numerics][property]") {
  for (const Rational q : {Rational(3, 2), Rational(2), Rational(3)}) {
    const Interval qi = ait::enclose(q, P64);
    CHECK(ait::tsallis_kernel_F(Interval(1), qi, P64) == Interval(0));

    const Interval am = ait::kernel_argmax(q, P64);
    const Interval km = ait::kernel_max(q, P64);
    const Real qr = r(q);
    CHECK(oracle::encloses(am, pow(qr, 1 / (1 - qr))));
    CHECK(oracle::encloses(km, pow(qr, qr / (1 - qr))));
    const Interval at_max = ait::tsallis_kernel_F(am, qi, P64);
    CHECK(at_max.overlaps(km));
    CHECK(oracle::encloses(at_max, pow(qr, qr / (1 - qr))));
    CHECK(at_max.width() <= Dyadic::pow2(-40));

    // x/q <= F(x) below the argmax, and F strictly monotone on each side
    oracle::Gen g(23);
    Interval prev_inc = Interval(0);
    for (int k = 1; k <= 1000; ++k) {
      const Dyadic x = divide(Dyadic(k) * am.lo(), Dyadic(1000), 80, ait::Rounding::down);
      const Interval f = ait::tsallis_kernel_F(Interval(x), qi, P64);
      const Interval lhs = ait::divide(Interval(x), qi, P64);
      REQUIRE_FALSE(lhs.certainly_greater(f));
      // equality holds at the argmax itself
      if (k < 1000) REQUIRE(lhs.hi() <= f.lo());
      if (k > 1) REQUIRE(prev_inc.certainly_less(f));
      prev_inc = f;
    }
    Interval prev_dec = at_max;
    for (int k = 1; k <= 200; ++k) {
      const Dyadic x = am.hi() + divide(Dyadic(k) * (Dyadic(1) - am.hi()), Dyadic(200), 80, ait::Rounding::down);
      const Interval f = ait::tsallis_kernel_F(Interval(x), qi, P64);
      REQUIRE(prev_dec.certainly_greater(f));
      prev_dec = f;
    }
  }
}

TEST_CASE("property: bisection roots satisfy the equation", "[numerics][property]") {
  oracle::Gen g(24);
  for (int i = 0; i < 300; ++i) {
    const Dyadic t = (g.unit_dyadic(20) * Dyadic(1, -2)) + Dyadic(1, -30);
    if (t >= Dyadic(1, -2)) continue;
    const Interval x = ait::bisect_monotone(kernel(2), Interval(t), Interval(Dyadic(1, -1), Dyadic(1)),
                                            ait::Monotone::decreasing, P64);
    // x - x^2 = t  =>  x = (1 + sqrt(1 - 4t)) / 2
    const Real root = (1 + sqrt(1 - 4 * oracle::to_real(t))) / 2;
    REQUIRE(oracle::encloses(x, root));
    REQUIRE(x.width() <= Dyadic::pow2(-64));
  }
}

TEST_CASE("interval basics", "[numerics]") {
  CHECK_THROWS_AS(Interval(Dyadic(1), Dyadic(0)), ait::DomainError);
  CHECK_THROWS_AS(ait::divide(Interval(1), Interval(Dyadic(-1), Dyadic(1)), P64), ait::DomainError);
  CHECK_THROWS_AS(Precision::of(2), ait::ValidationError);
  const Interval third = ait::enclose(Rational(1, 3), P64);
  CHECK(oracle::encloses(third, Real(1) / 3));
  CHECK(third.width() <= Dyadic::pow2(-64));
  CHECK(ait::enclose(Rational(3, 8), P64) == Interval(Dyadic(3, -3)));
}
