#include "ait/entropy.hpp"

#include <algorithm>
#include <map>

#include "ait/errors.hpp"
#include "ait/numerics.hpp"

namespace ait {
namespace {

void check_unit(const Interval& v, const BitString& s) {
  if (v.lo().sign() < 0 || v.hi() > Dyadic(1)) {
    throw DomainError("value " + v.to_string() + " at \"" + s.to_string() + "\" is outside [0, 1]");
  }
}

PartialSumSeries sum_terms(const SemiDistribution& p, const std::function<Interval(const Interval&)>& term,
                           Exec exec) {
  PartialSumSeries out;
  const auto values = evaluate_terms(
      p.size(),
      [&](std::size_t i) {
        check_unit(p[i].second, p[i].first);
        return term(p[i].second);
      },
      exec);
  out.terms.reserve(p.size());
  Interval total(0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    total += values[i];  // fixed index order: identical for any worker count
    out.terms.emplace_back(p[i].first, values[i]);
  }
  out.cumulative = total;
  return out;
}

SemiDistribution stage_values(const LowerSemimeasure& r, std::uint64_t stage, std::optional<std::uint64_t> bound) {
  SemiDistribution out;
  for (auto& [s, v] : r.values(stage, bound)) out.emplace_back(std::move(s), Interval(std::move(v)));
  return out;
}

Dyadic included_mass(const SemiDistribution& p) {
  Dyadic total;
  for (const auto& [s, v] : p) total += v.lo();
  return total;
}

Dyadic positive_part(const Dyadic& x) { return x.sign() < 0 ? Dyadic() : x; }

// Upper bounds of max -x log x on [0, 1]: 1/e and 1/(e ln 2).
const Dyadic kMaxXLnX = Dyadic(3, -3);
const Dyadic kMaxXLog2X = Dyadic(17, -5);

Interval shannon_term(const Interval& v, LogBase base, Precision prec) {
  if (v.hi().is_zero()) return Interval(0);
  if (v.lo().is_zero()) return Interval(Dyadic(), base == LogBase::natural ? kMaxXLnX : kMaxXLog2X);
  const Interval lg = base == LogBase::natural ? interval_ln(v, prec.plus(4)) : interval_log2(v, prec.plus(4));
  return -(v * lg);
}

void check_tsallis_q(const Interval& q) {
  if (q.contains(Dyadic(1))) throw DomainError("q must exclude 1, got " + q.to_string());
  if (q.lo().sign() <= 0) throw DomainError("q must be positive, got " + q.to_string());
}

Interval pow2_rational(const Rational& e, Precision prec) {
  if (e.get_den() == 1) return Interval(Dyadic::pow2(e.get_num().get_si()));
  return interval_pow(Interval(2), enclose(e, prec.plus(8)), prec);
}

}  // namespace

Interval PartialSumSeries::limit_enclosure() const {
  if (!tail_bound) throw PreconditionViolation("no certified tail bound for this series");
  return Interval(cumulative.lo(), cumulative.hi() + *tail_bound);
}

PartialSumSeries shannon_partial(const SemiDistribution& p, LogBase base, Precision prec, Exec exec) {
  return sum_terms(p, [&](const Interval& v) { return shannon_term(v, base, prec); }, exec);
}

PartialSumSeries shannon_partial(const LowerSemimeasure& r, std::uint64_t stage,
                                 std::optional<std::uint64_t> support_bound, LogBase base, Precision prec,
                                 Exec exec) {
  auto out = shannon_partial(stage_values(r, stage, support_bound), base, prec, exec);
  out.stage = stage;
  out.support_bound = support_bound;
  return out;
}

PartialSumSeries power_sum_partial(const SemiDistribution& p, const Interval& q, Precision prec, Exec exec) {
  if (q.lo().sign() <= 0) throw DomainError("power sums need q > 0, got " + q.to_string());
  return sum_terms(p, [&](const Interval& v) { return interval_pow(v, q, prec.plus(4)); }, exec);
}

PartialSumSeries power_sum_partial(const LowerSemimeasure& r, std::uint64_t stage,
                                   std::optional<std::uint64_t> support_bound, const Interval& q,
                                   Precision prec, Exec exec) {
  const auto values = stage_values(r, stage, support_bound);
  auto out = power_sum_partial(values, q, prec, exec);
  out.stage = stage;
  out.support_bound = support_bound;
  if (q.lo() >= Dyadic(1)) {
    // u^q - v^q <= q (u - v) on [0, 1]
    out.tail_bound = q.hi() * positive_part(r.mass_cap() - included_mass(values));
  }
  return out;
}

PartialSumSeries tsallis_partial(const SemiDistribution& p, const Interval& q, Precision prec, Exec exec) {
  check_tsallis_q(q);
  auto out = sum_terms(p, [&](const Interval& v) { return tsallis_kernel_F(v, q, prec.plus(4)); }, exec);

  // (sum v - sum v^q) / (q - 1)
  Interval mass(0);
  for (const auto& [s, v] : p) mass += v;
  const auto powers = power_sum_partial(p, q, prec.plus(8), exec);
  const Interval qm1 = q - Interval(1);
  const Dyadic& nearest = qm1.lo().sign() > 0 ? qm1.lo() : qm1.hi();
  const unsigned guard = static_cast<unsigned>(std::max<std::int64_t>(0, -nearest.magnitude()));
  const Interval aggregate = divide(mass - powers.cumulative, qm1, prec.plus(8 + guard));
  if (!aggregate.overlaps(out.cumulative)) {
    throw PrecisionError("the two Tsallis formulas disagree: " + aggregate.to_string() + " vs " +
                         out.cumulative.to_string());
  }
  out.alternate = aggregate;
  return out;
}

PartialSumSeries tsallis_partial(const LowerSemimeasure& r, std::uint64_t stage,
                                 std::optional<std::uint64_t> support_bound, const Interval& q, Precision prec,
                                 Exec exec) {
  check_tsallis_q(q);
  const auto values = stage_values(r, stage, support_bound);
  auto out = tsallis_partial(values, q, prec, exec);
  out.stage = stage;
  out.support_bound = support_bound;
  if (q.lo() > Dyadic(1)) {
    // Below the argmax every term only grows towards its limit, and
    // F(u) - F(v) <= (u - v)/(q - 1).
    const Dyadic cap = r.mass_cap();
    const Interval argmax = kernel_argmax(q.lo().to_rational(), prec);
    if (cap <= argmax.lo()) {
      out.tail_bound = divide(positive_part(cap - included_mass(values)), q.lo() - Dyadic(1),
                              static_cast<std::int64_t>(prec.bits) + 8, Rounding::up);
    }
  }
  return out;
}

Dyadic theta_hat(const EnumerationState& st) { return st.theta_hat(); }

namespace {

Interval theta_D_sum(const std::vector<std::uint64_t>& ks, const Rational& D, Precision prec) {
  if (D <= 0) throw DomainError("D must be positive, got " + D.get_str());
  std::map<std::uint64_t, std::size_t> counts;
  for (auto k : ks) ++counts[k];
  Interval total(0);
  for (const auto& [k, count] : counts) {
    const Rational e = Rational(-static_cast<long>(k)) / D;
    total += pow2_rational(e, prec.plus(8)) * Interval(static_cast<long>(count));
  }
  return total;
}

}  // namespace

Interval theta_D_hat(const EnumerationState& st, const Rational& D, Precision prec) {
  std::vector<std::uint64_t> ks;
  ks.reserve(st.outputs().size());
  for (const auto& [s, o] : st.outputs()) ks.push_back(o.min_len);
  return theta_D_sum(ks, D, prec);
}

Interval theta_D_hat(const EnumerationHistory& h, std::uint64_t n, const Rational& D, Precision prec) {
  std::vector<std::uint64_t> ks;
  for (const auto& s : h.support(n)) ks.push_back(*h.k_hat(n, s));
  return theta_D_sum(ks, D, prec);
}

std::optional<Dyadic> theta_D_gap(const EnumerationHistory& h, std::uint64_t n, const Rational& D) {
  if (D <= 0) throw DomainError("D must be positive, got " + D.get_str());
  if (D > 1 || h.machine().min_program_length() < 2) return std::nullopt;
  // For K >= 2 and D <= 1: 2^{-K/D} - 2^{-K'/D} <= 2^{-K} - 2^{-K'}, and the
  // theta shortfall is at most the halting-mass shortfall.
  return positive_part(Dyadic(1) - h.omega_hat(n));
}

Dyadic weighted_halting_sum(const std::vector<HaltRecord>& records, const LengthWeight& f, const StringPredicate& A) {
  std::map<std::uint64_t, std::uint64_t> per_length;
  for (const auto& r : records) {
    if (!A || A(r.output)) ++per_length[r.program.size()];
  }
  Dyadic total;
  for (const auto& [len, count] : per_length) {
    total += Dyadic(f(len) * static_cast<unsigned long>(count), -static_cast<std::int64_t>(len));
  }
  return total;
}

Dyadic weighted_halting_sum(const EnumerationState& st, const LengthWeight& f, const StringPredicate& A) {
  return weighted_halting_sum(st.records(), f, A);
}

Dyadic weighted_k_sum(const EnumerationState& st, const LengthWeight& f, const StringPredicate& A) {
  Dyadic total;
  for (const auto& [s, o] : st.outputs()) {
    if (A && !A(s)) continue;
    total += Dyadic(f(o.min_len), -static_cast<std::int64_t>(o.min_len));
  }
  return total;
}

WitnessResult divergence_witness(const LengthProfile& g, const Rational& q, const Rational& B, Precision prec) {
  if (q <= 0) throw ValidationError("q must be positive, got " + q.get_str());
  if (B <= 0) throw ValidationError("B must be positive, got " + B.get_str());
  const Rational ratio_exp = 1 - q * static_cast<unsigned long>(g.slope);
  if (ratio_exp < 0) return Converges{pow2_rational(ratio_exp, prec)};

  constexpr std::uint64_t kMaxN = 1u << 20;
  for (Precision p = prec; p.bits <= 8 * prec.bits + 256; p = Precision{p.bits * 2}) {
    Interval before(0);
    Interval total(0);
    bool undecided = false;
    for (std::uint64_t n = 0; n < kMaxN; ++n) {
      const Rational e = ratio_exp * static_cast<unsigned long>(n) - q * static_cast<unsigned long>(g.intercept);
      before = total;
      total += pow2_rational(e, p);
      const Interval bound = enclose(B, p);
      if (total.lo() >= bound.hi()) return Witness{n, total, before};
      if (total.hi() >= bound.lo()) {
        undecided = true;
        break;
      }
    }
    if (!undecided) throw PrecisionError("no witness below N = " + std::to_string(kMaxN));
  }
  throw PrecisionError("cannot decide where the bound crosses B = " + B.get_str());
}

DeficiencyProfile deficiency_profile(const EnumerationState& st, const BitString& alpha, const Rational& D) {
  DeficiencyProfile out;
  out.D = D;
  out.N = alpha.size();
  for (std::size_t n = 1; n <= alpha.size(); ++n) {
    const auto k = st.k_hat(alpha.prefix(n));
    if (!k) {
      out.slacks.emplace_back(std::nullopt);
      continue;
    }
    Rational slack = Rational(static_cast<unsigned long>(*k)) - D * static_cast<unsigned long>(n);
    if (!out.min_slack || slack < *out.min_slack) out.min_slack = slack;
    out.slacks.emplace_back(std::move(slack));
  }
  return out;
}

KGapReport kgap_report(const std::vector<std::tuple<BitString, std::uint64_t, Interval>>& rows, Precision prec) {
  KGapReport out;
  for (const auto& [s, k, p] : rows) {
    KGapRow row;
    row.s = s;
    row.k_hat = k;
    row.neg_log2_p = -interval_log2(p, prec);
    row.gap = Interval(static_cast<long>(k)) - row.neg_log2_p;
    if (!out.max_gap) {
      out.max_gap = row.gap;
      out.min_gap = row.gap;
    } else {
      out.max_gap = Interval(std::max(out.max_gap->lo(), row.gap.lo()), std::max(out.max_gap->hi(), row.gap.hi()));
      out.min_gap = Interval(std::min(out.min_gap->lo(), row.gap.lo()), std::min(out.min_gap->hi(), row.gap.hi()));
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

KGapReport kgap_report(const EnumerationState& st, std::optional<std::uint64_t> support_bound, Precision prec) {
  std::vector<std::tuple<BitString, std::uint64_t, Interval>> rows;
  for (const auto& [s, o] : st.outputs()) {
    if (support_bound && (s.size() >= 64 || index_of_u64(s) >= *support_bound)) continue;
    rows.emplace_back(s, o.min_len, Interval(o.mass));
  }
  return kgap_report(rows, prec);
}

}  // namespace ait
