#pragma once

// Lower-computable semimeasures as stage-indexed streams of dyadic lower
// bounds, plus the constructions built from them.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ait/bitstring.hpp"
#include "ait/enumeration.hpp"
#include "ait/interval.hpp"

namespace ait {

/// r given by approx(n, s) with
///   0 <= approx(n, s) <= approx(n + 1, s) -> r(s),
///   approx(n, s) = 0 off the finite, growing support(n),
///   sum over support(n) of approx(n, s) <= 1.
class LowerSemimeasure {
 public:
  class Model {
   public:
    virtual ~Model() = default;
    [[nodiscard]] virtual Dyadic approx(std::uint64_t n, const BitString& s) const = 0;
    /// Sorted in string order.
    [[nodiscard]] virtual std::vector<BitString> support(std::uint64_t n) const = 0;
    /// Certified bound on sum_s r(s).
    [[nodiscard]] virtual Dyadic mass_cap() const { return Dyadic(1); }
    /// Certified upper bound on r(s), when one is known at stage n.
    [[nodiscard]] virtual std::optional<Dyadic> upper(std::uint64_t n, const BitString& s) const {
      (void)n;
      (void)s;
      return std::nullopt;
    }
    [[nodiscard]] virtual std::string describe() const = 0;
  };

  explicit LowerSemimeasure(std::shared_ptr<const Model> m) : model_(std::move(m)) {}

  [[nodiscard]] Dyadic approx(std::uint64_t n, const BitString& s) const { return model_->approx(n, s); }
  [[nodiscard]] std::vector<BitString> support(std::uint64_t n) const { return model_->support(n); }
  [[nodiscard]] Dyadic mass_cap() const { return model_->mass_cap(); }
  [[nodiscard]] std::optional<Dyadic> upper(std::uint64_t n, const BitString& s) const {
    return model_->upper(n, s);
  }
  [[nodiscard]] std::string describe() const { return model_->describe(); }

  /// Sum of approx(n, s) over support(n).
  [[nodiscard]] Dyadic stage_mass(std::uint64_t n) const;
  /// (s, approx(n, s)) for s in support(n) with index_of(s) < bound (all of
  /// the support when bound is empty).
  [[nodiscard]] std::vector<std::pair<BitString, Dyadic>> values(
      std::uint64_t n, std::optional<std::uint64_t> bound = std::nullopt) const;

 private:
  std::shared_ptr<const Model> model_;
};

/// Stage n gives p_hat at stage n. Upper bounds come from the machine's
/// missing-mass certificate when it has one.
LowerSemimeasure from_p_hat(std::shared_ptr<const EnumerationHistory> history);
/// Stage n gives 2^{-k_hat} at stage n (0 while k_hat is infinite).
LowerSemimeasure from_k_hat(std::shared_ptr<const EnumerationHistory> history);

/// The same values at every stage. Throws WeightError for negative values
/// or total mass above 1.
LowerSemimeasure finite_semimeasure(std::map<BitString, Dyadic> values);

/// Exact SDVM P and 2^{-K_SDVM} over strings of length <= max_len. Stage n
/// holds the strings of length <= min(n, max_len); P values are rounded
/// down to n + 2 fractional bits, so they climb to the exact limit.
LowerSemimeasure sdvm_exact_p(std::size_t max_len);
LowerSemimeasure sdvm_exact_two_pow_minus_k(std::size_t max_len);

/// c * r for 0 < c <= 1. Throws ValidationError otherwise.
LowerSemimeasure scale(const LowerSemimeasure& r, const Dyadic& c);

/// sum_i w_i r_i. Throws WeightError when some w_i <= 0, sum w_i > 1, or the
/// lists differ in length.
LowerSemimeasure finite_mixture(const std::vector<LowerSemimeasure>& rs, const std::vector<Dyadic>& ws);

/// Stage-indexed nondecreasing dyadic sequence (a left-computable real).
using DyadicStream = std::function<Dyadic(std::uint64_t)>;

/// m(lambda) = 2^{-c} theta(n), m(s) = r(s) elsewhere. Stage values throw
/// PreconditionViolation if theta decreases, if 2^{-c} theta(n) exceeds 1
/// or a certified upper bound on lim r(lambda), or if the stage mass
/// (checked by support) exceeds 1.
LowerSemimeasure ceps_transform(const LowerSemimeasure& r, unsigned c, DyadicStream theta);

/// r(s) = F(m(s))/d with F the Tsallis kernel. Stage values are certified
/// lower bounds, kept monotone by taking the best bound over earlier
/// stages. Throws BranchError if some m value certainly exceeds
/// q^{1/(1-q)}, ValidationError for q <= 1 or d = 0.
LowerSemimeasure tewcr_transform(const LowerSemimeasure& m, const Dyadic& q, std::uint64_t d,
                                 Precision prec);

/// Right-computable y: upper(n) is nonincreasing with limit y, and
/// floor <= y is a known lower bound.
struct YStream {
  std::function<Dyadic(std::uint64_t)> upper;
  Dyadic floor;

  static YStream constant(const Dyadic& y) {
    return {[y](std::uint64_t) { return y; }, y};
  }
};

struct ConstructionReport {
  Dyadic q;
  Dyadic y_hi;
  Dyadic y_floor;
  Dyadic c;
  Interval x0;
  Interval theta;
  Interval a;
  /// S_q(m) = F(a) + Theta with a and Theta kept dependent: evaluated at the
  /// two ends of the Theta enclosure.
  Interval sq_m;
  /// F([a]) + [Theta] with the enclosures treated as independent.
  Interval sq_m_naive;
  Interval argmax;
  Dyadic stage_mass;
  std::uint64_t stage = 0;
  std::optional<std::uint64_t> support_bound;

  [[nodiscard]] std::string to_json(int digits) const;
};

struct SqyResult {
  LowerSemimeasure m;
  ConstructionReport report;
};

/// Builds m with S_q(m) = y from r: m(lambda) = a and m(s) = c r(s - 1).
/// The report is taken at `stage`, summing over strings with index below
/// `support_bound`. Throws RangeError when y is not in (0, q^{q/(1-q)}],
/// ValidationError for q <= 1, and BracketError / PrecisionError from the
/// root finder.
SqyResult sqy_construct(const LowerSemimeasure& r, const Dyadic& q, const YStream& y, Precision prec,
                        std::uint64_t stage, std::optional<std::uint64_t> support_bound = std::nullopt);

struct DominationReport {
  std::uint64_t max_stage = 0;
  std::optional<std::uint64_t> support_bound;
  Dyadic c;
  std::size_t pairs_checked = 0;
  std::size_t pairs_with_upper = 0;
  bool violated = false;
  bool vacuous = false;
  BitString witness;
  std::uint64_t witness_stage = 0;
};

/// Looks for c * approx_r(n, s) > upper_m(n, s). Without upper bounds on m
/// nothing can be refuted and the verdict stays "not falsified".
DominationReport check_domination(const LowerSemimeasure& r, const LowerSemimeasure& m, const Dyadic& c,
                                  std::uint64_t max_stage, std::optional<std::uint64_t> support_bound);

struct AuditReport {
  std::uint64_t stages = 0;
  std::vector<std::string> violations;
  [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// Checks the semimeasure contract on stages 0..max_stage: nonnegative,
/// monotone values, nested supports with zeros outside, stage mass <= 1.
AuditReport audit_contract(const LowerSemimeasure& r, std::uint64_t max_stage);

}  // namespace ait
