// m(lambda) = a and m(s) = c r(s - 1), with c and a chosen so that
// S_q(m) = F(a) + S_q(c r) = y.

#include <algorithm>
#include <map>
#include <mutex>

#include <json.hpp>

#include "ait/entropy.hpp"
#include "ait/errors.hpp"
#include "ait/numerics.hpp"
#include "ait/semimeasure.hpp"

namespace ait {
namespace {

BitString predecessor(const BitString& s) {
  if (s.size() < 63) return string_at_u64(index_of_u64(s) - 1);
  return string_at(index_of(s) - 1);
}

// Root of F(x) = target on [argmax.lo, right], where F decreases past the
// argmax. Targets at or above F(argmax.lo) clamp to argmax.lo: the true
// root lies right of the argmax anyway.
class DecreasingBranch {
 public:
  DecreasingBranch(const Dyadic& q, const Interval& argmax, Precision prec)
      : q_(q), argmax_(argmax), prec_(prec),
        top_(tsallis_kernel_F(Interval(argmax.lo()), Interval(q), prec).lo()) {}

  [[nodiscard]] Interval F(const Interval& x, Precision p) const { return tsallis_kernel_F(x, Interval(q_), p); }

  [[nodiscard]] Dyadic root_lo(const Dyadic& target, const Dyadic& right) const {
    if (target >= top_) return argmax_.lo();
    return solve(Interval(target), right).lo();
  }
  [[nodiscard]] Dyadic root_hi(const Dyadic& target, const Dyadic& right) const {
    if (target >= top_) return argmax_.hi();
    return solve(Interval(target), right).hi();
  }
  [[nodiscard]] Interval roots(const Interval& target, const Dyadic& right) const {
    return Interval(root_lo(target.hi(), right), root_hi(target.lo(), right));
  }

 private:
  [[nodiscard]] Interval solve(const Interval& target, const Dyadic& right) const {
    const IntervalFunction f = [this](const Interval& x, Precision p) { return F(x, p); };
    return bisect_monotone(f, target, Interval(argmax_.lo(), right), Monotone::decreasing, prec_);
  }

  Dyadic q_;
  Interval argmax_;
  Precision prec_;
  Dyadic top_;
};

class SqyModel final : public LowerSemimeasure::Model {
 public:
  SqyModel(LowerSemimeasure r1, Dyadic q, YStream y, Precision prec, std::optional<std::uint64_t> bound,
           DecreasingBranch branch, Interval x0)
      : r1_(std::move(r1)), q_(std::move(q)), y_(std::move(y)), prec_(prec), bound_(bound),
        branch_(std::move(branch)), x0_(std::move(x0)) {}

  Dyadic approx(std::uint64_t n, const BitString& s) const override {
    if (!s.empty()) return r1_.approx(n, predecessor(s));
    return a_lower(n);
  }

  std::vector<BitString> support(std::uint64_t n) const override {
    std::vector<BitString> out{BitString()};
    for (const auto& t : r1_.support(n)) out.push_back(successor(t));
    return out;
  }

  Dyadic mass_cap() const override { return std::min(Dyadic(1), x0_.hi() + r1_.mass_cap()); }

  std::optional<Dyadic> upper(std::uint64_t n, const BitString& s) const override {
    if (s.empty()) return std::nullopt;
    return r1_.upper(n, predecessor(s));
  }

  std::string describe() const override { return "sqy(" + r1_.describe() + ", q=" + q_.to_string() + ")"; }

  /// Lower bound on a from stage n: the root for target y_n - Theta_lo(n),
  /// kept nondecreasing across stages.
  Dyadic a_lower(std::uint64_t n) const {
    std::lock_guard<std::mutex> lock(mu_);
    Dyadic best;
    for (std::uint64_t k = 0; k <= n; ++k) {
      auto it = per_stage_.find(k);
      if (it == per_stage_.end()) {
        const Dyadic theta_lo =
            tsallis_partial(r1_, k, bound_, Interval(q_), prec_, Exec::serial).cumulative.lo();
        const Dyadic lo = branch_.root_lo(y_.upper(k) - theta_lo, x0_.hi());
        it = per_stage_.emplace(k, lo).first;
      }
      if (it->second > best) best = it->second;
    }
    return best;
  }

 private:
  LowerSemimeasure r1_;
  Dyadic q_;
  YStream y_;
  Precision prec_;
  std::optional<std::uint64_t> bound_;
  DecreasingBranch branch_;
  Interval x0_;
  mutable std::mutex mu_;
  mutable std::map<std::uint64_t, Dyadic> per_stage_;
};

nlohmann::json interval_json(const Interval& x, int digits) {
  return nlohmann::json::array({x.lo().to_decimal(digits, Rounding::down), x.hi().to_decimal(digits, Rounding::up)});
}

}  // namespace

std::string ConstructionReport::to_json(int digits) const {
  nlohmann::ordered_json j;
  j["q"] = q.to_string();
  j["y_hi"] = y_hi.to_string();
  j["y_floor"] = y_floor.to_string();
  j["c"] = c.to_string();
  j["x0"] = interval_json(x0, digits);
  j["theta"] = interval_json(theta, digits);
  j["a"] = interval_json(a, digits);
  j["sq_m"] = interval_json(sq_m, digits);
  j["sq_m_naive"] = interval_json(sq_m_naive, digits);
  j["argmax"] = interval_json(argmax, digits);
  j["stage_mass"] = stage_mass.to_decimal(digits, Rounding::up);
  j["stage"] = stage;
  if (support_bound) {
    j["support_bound"] = *support_bound;
  } else {
    j["support_bound"] = nullptr;
  }
  return j.dump(2);
}

SqyResult sqy_construct(const LowerSemimeasure& r, const Dyadic& q, const YStream& y, Precision prec,
                        std::uint64_t stage, std::optional<std::uint64_t> support_bound) {
  if (q <= Dyadic(1)) throw ValidationError("sqy needs q > 1, got " + q.to_string());
  if (!y.upper) throw ValidationError("sqy needs a y stream");
  const Rational qr = q.to_rational();
  const Interval argmax = kernel_argmax(qr, prec);
  const Interval kmax = kernel_max(qr, prec);

  ConstructionReport rep;
  rep.q = q;
  rep.y_hi = y.upper(stage);
  rep.y_floor = y.floor;
  rep.argmax = argmax;
  rep.stage = stage;
  rep.support_bound = support_bound;
  if (rep.y_floor.sign() <= 0) throw RangeError("y must be positive, got floor " + rep.y_floor.to_string());
  if (rep.y_hi > kmax.hi()) {
    throw RangeError("y = " + rep.y_hi.to_string() + " exceeds q^{q/(1-q)} ~ " + kmax.to_string(12));
  }
  if (rep.y_floor > rep.y_hi) throw ValidationError("y floor lies above the y stream");
  if (r.mass_cap() > Dyadic(1)) throw ValidationError("input mass cap exceeds 1");

  const DecreasingBranch branch(q, argmax, prec);
  // (1) F(x0) = y/2 on the decreasing branch
  rep.x0 = branch.roots(Interval(rep.y_floor.shifted(-1), rep.y_hi.shifted(-1)), Dyadic(1));

  // (2) c = largest power of two <= min{argmax, 1 - x0, (q - 1) y / 2}
  Dyadic bound = std::min({argmax.lo(), Dyadic(1) - rep.x0.hi(), (q - Dyadic(1)) * rep.y_floor.shifted(-1)});
  if (bound.sign() <= 0) throw PrecisionError("cannot certify a positive scale factor c");
  rep.c = Dyadic::pow2(bound.magnitude());

  // (3) r1 = c r, (4) Theta = S_q(r1)
  const LowerSemimeasure r1 = scale(r, rep.c);
  const auto series = tsallis_partial(r1, stage, support_bound, Interval(q), prec);
  rep.theta = series.limit_enclosure();

  // (5) F(a) = y - Theta on (argmax, x0)
  const Interval target(rep.y_floor - rep.theta.hi(), rep.y_hi - rep.theta.lo());
  rep.a = branch.roots(target, rep.x0.hi());

  // S_q(m) = F(a(Theta)) + Theta. Evaluating at each end of the Theta
  // enclosure keeps the dependence of a on Theta.
  std::optional<Interval> sq;
  for (const Dyadic& th : {rep.theta.lo(), rep.theta.hi()}) {
    const Interval a_th = branch.roots(Interval(rep.y_floor - th, rep.y_hi - th), rep.x0.hi());
    const Interval s = branch.F(a_th, prec) + Interval(th);
    sq = sq ? sq->hull(s) : s;
  }
  rep.sq_m = *sq;
  rep.sq_m_naive = branch.F(rep.a, prec) + rep.theta;

  // (6) m(lambda) = a, m(s) = r1(s - 1)
  auto model = std::make_shared<SqyModel>(r1, q, y, prec, support_bound, branch, rep.x0);
  LowerSemimeasure m(model);
  rep.stage_mass = m.stage_mass(stage);
  return {m, rep};
}

}  // namespace ait
