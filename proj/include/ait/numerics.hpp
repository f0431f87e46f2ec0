#pragma once

// Certified elementary functions over Interval, the Tsallis kernel
// F(x) = (x - x^q)/(q - 1) and a bracketing bisection root finder.
//
// Every function returns an enclosure of the exact result. For point
// arguments the enclosure width is at most 2^{-prec.bits}.

#include <functional>

#include "ait/interval.hpp"

namespace ait {

/// x^q. Exact for point x and nonnegative integer q; otherwise computed
/// from correctly rounded x^q at the corners of the argument box (x^q is
/// monotone in each argument on x >= 0). 0^q = 0 for q > 0.
/// Throws DomainError if x.lo < 0, DivergenceError if x touches 0 and q.lo <= 0.
Interval interval_pow(const Interval& x, const Interval& q, Precision prec);

/// Natural logarithm. Throws DomainError if x.lo <= 0.
Interval interval_ln(const Interval& x, Precision prec);

/// Binary logarithm; exact at powers of two. Throws DomainError if x.lo <= 0.
Interval interval_log2(const Interval& x, Precision prec);

/// F(x) = (x - x^q)/(q - 1) for 0 <= x <= 1.
/// Throws DomainError outside [0,1] or when q - 1 encloses 0.
Interval tsallis_kernel_F(const Interval& x, const Interval& q, Precision prec);

/// q^{1/(1-q)}: where F attains its maximum for q > 1.
Interval kernel_argmax(const Rational& q, Precision prec);
/// q^{q/(1-q)} = F(q^{1/(1-q)}), the maximum of F for q > 1.
Interval kernel_max(const Rational& q, Precision prec);

enum class Monotone { increasing, decreasing };

/// Interval extension of a monotone function. The precision argument lets
/// the root finder ask for tighter evaluations.
using IntervalFunction = std::function<Interval(const Interval&, Precision)>;

/// Encloses the x in `bracket` with f(x) in `target` (the hull of the roots
/// for the two target endpoints). Pure bisection on dyadic midpoints.
///
/// f must be strictly monotone on the bracket in the stated direction and
/// the endpoint values must straddle the target (endpoints may be roots).
/// Throws BracketError when they do not, and PrecisionError when interval
/// evaluations cannot separate a midpoint from the target.
Interval bisect_monotone(const IntervalFunction& f, const Interval& target,
                         const Interval& bracket, Monotone direction, Precision prec);

}  // namespace ait
