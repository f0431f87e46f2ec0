#pragma once

// Certified partial sums: Shannon entropy, power sums, Tsallis entropy,
// theta and theta^D, the weighted halting sums, divergence witnesses and
// finite deficiency diagnostics.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "ait/enumeration.hpp"
#include "ait/interval.hpp"
#include "ait/kernels.hpp"
#include "ait/semimeasure.hpp"

namespace ait {

/// Finite list of (string, value enclosure) pairs.
using SemiDistribution = std::vector<std::pair<BitString, Interval>>;

struct PartialSumSeries {
  std::vector<std::pair<BitString, Interval>> terms;  // string order
  Interval cumulative;                                // sum of terms
  std::uint64_t stage = 0;
  std::optional<std::uint64_t> support_bound;
  /// With a tail bound, [cumulative.lo, cumulative.hi + tail] holds the limit.
  std::optional<Dyadic> tail_bound;
  /// The same total by a second, independent formula (Tsallis only).
  std::optional<Interval> alternate;

  /// Throws PreconditionViolation when there is no tail bound.
  [[nodiscard]] Interval limit_enclosure() const;
};

enum class LogBase { natural, binary };

/// -sum v log v, with 0 log 0 = 0. Throws DomainError for values outside [0, 1].
PartialSumSeries shannon_partial(const SemiDistribution& p, LogBase base, Precision prec,
                                 Exec exec = Exec::parallel);
PartialSumSeries shannon_partial(const LowerSemimeasure& r, std::uint64_t stage,
                                 std::optional<std::uint64_t> support_bound, LogBase base, Precision prec,
                                 Exec exec = Exec::parallel);

/// sum v^q for q > 0, with 0^q = 0. For q >= 1 a semimeasure gets the tail
/// q (cap - sum v).
PartialSumSeries power_sum_partial(const SemiDistribution& p, const Interval& q, Precision prec,
                                   Exec exec = Exec::parallel);
PartialSumSeries power_sum_partial(const LowerSemimeasure& r, std::uint64_t stage,
                                   std::optional<std::uint64_t> support_bound, const Interval& q,
                                   Precision prec, Exec exec = Exec::parallel);

/// (sum v - sum v^q)/(q - 1), evaluated termwise and cross-checked against
/// the aggregate formula (kept in `alternate`; PrecisionError if the two
/// do not overlap). Throws DomainError when q contains 1 or q.lo <= 0.
/// For q > 1 a semimeasure whose cap lies below q^{1/(1-q)} gets the tail
/// (cap - sum v)/(q - 1).
PartialSumSeries tsallis_partial(const SemiDistribution& p, const Interval& q, Precision prec,
                                 Exec exec = Exec::parallel);
PartialSumSeries tsallis_partial(const LowerSemimeasure& r, std::uint64_t stage,
                                 std::optional<std::uint64_t> support_bound, const Interval& q,
                                 Precision prec, Exec exec = Exec::parallel);

Dyadic theta_hat(const EnumerationState& st);
/// sum 2^{-k_hat(s)/D} over the strings found. Throws DomainError for D <= 0.
Interval theta_D_hat(const EnumerationState& st, const Rational& D, Precision prec);
Interval theta_D_hat(const EnumerationHistory& h, std::uint64_t n, const Rational& D, Precision prec);

/// Bound on theta^D - theta_D_hat(n) for 0 < D <= 1: the missing halting
/// mass 1 - omega_hat(n). Needs every program of the machine to be at least
/// 2 bits long; nullopt otherwise or for D > 1.
std::optional<Dyadic> theta_D_gap(const EnumerationHistory& h, std::uint64_t n, const Rational& D);

using LengthWeight = std::function<mpz_class(std::uint64_t)>;
using StringPredicate = std::function<bool(const BitString&)>;

/// sum f(|p|) 2^{-|p|} over records whose output satisfies A.
Dyadic weighted_halting_sum(const std::vector<HaltRecord>& records, const LengthWeight& f,
                            const StringPredicate& A);
Dyadic weighted_halting_sum(const EnumerationState& st, const LengthWeight& f, const StringPredicate& A);
/// sum f(k_hat(s)) 2^{-k_hat(s)} over outputs found that satisfy A.
Dyadic weighted_k_sum(const EnumerationState& st, const LengthWeight& f, const StringPredicate& A);

/// Certified length bound g(n) = slope n + intercept: every string of length
/// n has a program of at most g(n) bits.
struct LengthProfile {
  std::uint64_t slope = 2;
  std::uint64_t intercept = 2;

  static LengthProfile sdvm() { return {2, 2}; }
};

struct Converges {
  /// The bound's term ratio 2^{1 - q slope}.
  Interval ratio;
};
struct Witness {
  std::uint64_t n = 0;
  /// sum_{k <= n} 2^k 2^{-q g(k)}, enclosed.
  Interval bound_at_n;
  Interval bound_before;
};
using WitnessResult = std::variant<Witness, Converges>;

/// Least N with sum_{n <= N} 2^n 2^{-q g(n)} >= B, or Converges when the
/// terms shrink geometrically (q slope > 1). Throws ValidationError for
/// q <= 0 or B <= 0.
WitnessResult divergence_witness(const LengthProfile& g, const Rational& q, const Rational& B, Precision prec);

struct DeficiencyProfile {
  Rational D;
  std::size_t N = 0;
  /// slacks[n-1] = k_hat(alpha_n) - D n; nullopt when k_hat is infinite.
  std::vector<std::optional<Rational>> slacks;
  std::optional<Rational> min_slack;
};

DeficiencyProfile deficiency_profile(const EnumerationState& st, const BitString& alpha, const Rational& D);

struct KGapRow {
  BitString s;
  std::uint64_t k_hat = 0;
  Interval neg_log2_p;  // -log2 p_hat(s)
  Interval gap;         // k_hat - (-log2 p_hat)
};
struct KGapReport {
  std::vector<KGapRow> rows;
  std::optional<Interval> max_gap;
  std::optional<Interval> min_gap;
};

/// Rows for found strings with index below the bound (all found strings
/// when empty).
KGapReport kgap_report(const EnumerationState& st, std::optional<std::uint64_t> support_bound, Precision prec);
/// The same table from an arbitrary pair of K values and P enclosures.
KGapReport kgap_report(const std::vector<std::tuple<BitString, std::uint64_t, Interval>>& rows, Precision prec);

}  // namespace ait
