#include "ait/numerics.hpp"

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ait/errors.hpp"
#include "mpfr_support.hpp"

namespace ait {
namespace {

using detail::Mpfr;

constexpr mpfr_prec_t kMaxWorkingPrecision = 1 << 16;

Dyadic width_goal(Precision prec) { return Dyadic::pow2(-static_cast<std::int64_t>(prec.bits)); }

// Evaluates a monotone-at-the-corners function at working precision P,
// doubling P until point arguments give a narrow enough result.
template <typename Eval>
Interval with_adaptive_precision(bool point_args, Precision prec, Eval&& eval) {
  for (mpfr_prec_t p = static_cast<mpfr_prec_t>(prec.bits) + 32; p <= kMaxWorkingPrecision; p *= 2) {
    Interval r = eval(p);
    if (!point_args || r.width() <= width_goal(prec)) return r;
  }
  throw PrecisionError("working precision exhausted before reaching 2^-" + std::to_string(prec.bits));
}

std::optional<Interval> exact_integer_power(const Interval& x, const Interval& q) {
  if (!q.is_point() || !q.lo().is_integer() || q.lo().sign() < 0) return std::nullopt;
  if (q.lo() > Dyadic(4096)) return std::nullopt;
  const unsigned long k = q.lo().numerator().get_ui() << q.lo().exponent();
  const auto bits = std::max(mpz_sizeinbase(x.lo().numerator().get_mpz_t(), 2),
                             mpz_sizeinbase(x.hi().numerator().get_mpz_t(), 2));
  if (bits * k > (1u << 16)) return std::nullopt;
  auto power = [k](const Dyadic& d) {
    mpz_class n;
    mpz_pow_ui(n.get_mpz_t(), d.numerator().get_mpz_t(), k);
    return Dyadic(n, d.exponent() * static_cast<std::int64_t>(k));
  };
  return Interval(power(x.lo()), power(x.hi()));
}

using UnaryMpfr = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);

Interval monotone_unary(const Interval& x, Precision prec, UnaryMpfr fn) {
  const Mpfr xlo(x.lo());
  const Mpfr xhi(x.hi());
  return with_adaptive_precision(x.is_point(), prec, [&](mpfr_prec_t p) {
    Mpfr lo(p);
    Mpfr hi(p);
    fn(lo.get(), xlo.get(), MPFR_RNDD);
    fn(hi.get(), xhi.get(), MPFR_RNDU);
    return Interval(lo.to_dyadic(), hi.to_dyadic());
  });
}

}  // namespace

Interval interval_pow(const Interval& x, const Interval& q, Precision prec) {
  if (x.lo().sign() < 0) throw DomainError("interval_pow: negative base " + x.to_string());
  if (x.lo().is_zero() && q.lo().sign() <= 0) {
    throw DivergenceError("interval_pow: 0^q with q <= 0");
  }
  if (auto exact = exact_integer_power(x, q)) return *exact;

  std::vector<const Dyadic*> xs{&x.lo()};
  if (!x.is_point()) xs.push_back(&x.hi());
  std::vector<const Dyadic*> qs{&q.lo()};
  if (!q.is_point()) qs.push_back(&q.hi());

  std::vector<std::unique_ptr<Mpfr>> xm;
  std::vector<std::unique_ptr<Mpfr>> qm;
  for (const Dyadic* d : xs) xm.push_back(std::make_unique<Mpfr>(*d));
  for (const Dyadic* d : qs) qm.push_back(std::make_unique<Mpfr>(*d));

  return with_adaptive_precision(x.is_point() && q.is_point(), prec, [&](mpfr_prec_t p) {
    std::optional<Dyadic> lo;
    std::optional<Dyadic> hi;
    Mpfr r(p);
    for (const auto& xv : xm) {
      for (const auto& qv : qm) {
        mpfr_pow(r.get(), xv->get(), qv->get(), MPFR_RNDD);
        Dyadic d = r.to_dyadic();
        if (!lo || d < *lo) lo = d;
        mpfr_pow(r.get(), xv->get(), qv->get(), MPFR_RNDU);
        Dyadic u = r.to_dyadic();
        if (!hi || u > *hi) hi = u;
      }
    }
    return Interval(*lo, *hi);
  });
}

Interval interval_ln(const Interval& x, Precision prec) {
  if (x.lo().sign() <= 0) throw DomainError("interval_ln: argument not positive: " + x.to_string());
  return monotone_unary(x, prec, mpfr_log);
}

Interval interval_log2(const Interval& x, Precision prec) {
  if (x.lo().sign() <= 0) throw DomainError("interval_log2: argument not positive: " + x.to_string());
  return monotone_unary(x, prec, mpfr_log2);
}

Interval tsallis_kernel_F(const Interval& x, const Interval& q, Precision prec) {
  if (x.lo().sign() < 0 || x.hi() > Dyadic(1)) {
    throw DomainError("tsallis kernel needs 0 <= x <= 1, got " + x.to_string());
  }
  const Interval qm1 = q - Interval(1);
  if (qm1.contains_zero()) throw DomainError("tsallis kernel: q - 1 encloses 0");
  // Dividing by a small q - 1 magnifies the numerator width.
  const Dyadic& nearest = qm1.lo().sign() > 0 ? qm1.lo() : qm1.hi();
  const std::int64_t mag = nearest.magnitude();
  const Precision inner = prec.plus(8 + static_cast<unsigned>(std::max<std::int64_t>(0, -mag)));
  const Interval xq = interval_pow(x, q, inner);
  return divide(x - xq, qm1, inner);
}

Interval kernel_argmax(const Rational& q, Precision prec) {
  if (q == 1) throw DomainError("kernel_argmax: q = 1");
  const Rational e = 1 / (1 - q);
  return interval_pow(enclose(q, prec.plus(8)), enclose(e, prec.plus(8)), prec);
}

Interval kernel_max(const Rational& q, Precision prec) {
  if (q == 1) throw DomainError("kernel_max: q = 1");
  const Rational e = q / (1 - q);
  return interval_pow(enclose(q, prec.plus(8)), enclose(e, prec.plus(8)), prec);
}

Interval bisect_monotone(const IntervalFunction& f, const Interval& target, const Interval& bracket,
                         Monotone direction, Precision prec) {
  const int orient = direction == Monotone::increasing ? 1 : -1;

  // Sign of f(x) - t, oriented so the root sits where it changes from -1 to +1.
  auto side = [&](const Dyadic& x, const Dyadic& t) -> int {
    for (unsigned bits = prec.bits + 8; bits <= 16 * prec.bits + 512; bits *= 2) {
      const Interval v = f(Interval(x), Precision{bits});
      if (v.hi() < t) return -orient;
      if (v.lo() > t) return orient;
      if (v.is_point()) return 0;
    }
    throw PrecisionError("bisection cannot separate f(" + x.to_string() + ") from the target " +
                         t.to_string());
  };

  const Dyadic eps = width_goal(prec);
  auto solve = [&](const Dyadic& t) -> Interval {
    Dyadic lo = bracket.lo();
    Dyadic hi = bracket.hi();
    const int slo = side(lo, t);
    const int shi = side(hi, t);
    if (slo > 0 || shi < 0) {
      throw BracketError("bracket " + bracket.to_string() + " does not straddle target " +
                         Interval(t).to_string(20));
    }
    if (slo == 0) return Interval(lo);
    if (shi == 0) return Interval(hi);
    while (hi - lo > eps) {
      Dyadic mid = (lo + hi).shifted(-1);
      const int s = side(mid, t);
      if (s == 0) return Interval(mid);
      if (s < 0) {
        lo = std::move(mid);
      } else {
        hi = std::move(mid);
      }
    }
    return Interval(lo, hi);
  };

  if (target.is_point()) return solve(target.lo());
  return solve(target.lo()).hull(solve(target.hi()));
}

}  // namespace ait
