#include "ait/semimeasure.hpp"

#include <algorithm>
#include <set>

#include "ait/errors.hpp"
#include "ait/numerics.hpp"
#include "ait/sdvm.hpp"

namespace ait {
namespace {

Dyadic two_pow_minus(std::uint64_t k) { return Dyadic::pow2(-static_cast<std::int64_t>(k)); }

bool index_below(const BitString& s, std::optional<std::uint64_t> bound) {
  if (!bound) return true;
  if (s.size() >= 64) return false;
  return index_of_u64(s) < *bound;
}

class PHatModel final : public LowerSemimeasure::Model {
 public:
  explicit PHatModel(std::shared_ptr<const EnumerationHistory> h) : h_(std::move(h)) {}
  Dyadic approx(std::uint64_t n, const BitString& s) const override { return h_->p_hat(n, s); }
  std::vector<BitString> support(std::uint64_t n) const override { return h_->support(n); }
  std::optional<Dyadic> upper(std::uint64_t n, const BitString& s) const override {
    auto tail = h_->p_tail(n, s);
    if (!tail) return std::nullopt;
    return h_->p_hat(n, s) + *tail;
  }
  std::string describe() const override { return "p_hat(" + h_->machine().name() + ")"; }

 private:
  std::shared_ptr<const EnumerationHistory> h_;
};

class KHatModel final : public LowerSemimeasure::Model {
 public:
  explicit KHatModel(std::shared_ptr<const EnumerationHistory> h) : h_(std::move(h)) {}
  Dyadic approx(std::uint64_t n, const BitString& s) const override {
    const auto k = h_->k_hat(n, s);
    return k ? two_pow_minus(*k) : Dyadic();
  }
  std::vector<BitString> support(std::uint64_t n) const override { return h_->support(n); }
  std::string describe() const override { return "2^-k_hat(" + h_->machine().name() + ")"; }

 private:
  std::shared_ptr<const EnumerationHistory> h_;
};

class FiniteModel final : public LowerSemimeasure::Model {
 public:
  explicit FiniteModel(std::map<BitString, Dyadic> v) : v_(std::move(v)) {
    for (const auto& [s, x] : v_) {
      if (x.sign() < 0) throw WeightError("negative value at \"" + s.to_string() + "\"");
      total_ += x;
    }
    if (total_ > Dyadic(1)) throw WeightError("total mass " + total_.to_string() + " exceeds 1");
    for (const auto& [s, x] : v_) keys_.push_back(s);
  }
  Dyadic approx(std::uint64_t, const BitString& s) const override {
    const auto it = v_.find(s);
    return it == v_.end() ? Dyadic() : it->second;
  }
  std::vector<BitString> support(std::uint64_t) const override { return keys_; }
  Dyadic mass_cap() const override { return total_; }
  std::optional<Dyadic> upper(std::uint64_t n, const BitString& s) const override { return approx(n, s); }
  std::string describe() const override { return "finite(" + std::to_string(v_.size()) + " strings)"; }

 private:
  std::map<BitString, Dyadic> v_;
  std::vector<BitString> keys_;
  Dyadic total_;
};

std::vector<BitString> strings_upto(std::size_t len) {
  std::vector<BitString> out;
  const std::uint64_t count = (std::uint64_t{2} << len) - 1;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(string_at_u64(i));
  return out;
}

class SdvmExactModel final : public LowerSemimeasure::Model {
 public:
  SdvmExactModel(std::size_t max_len, bool use_k) : max_len_(max_len), use_k_(use_k) {
    if (max_len > 24) throw ValidationError("exact SDVM tables are limited to strings of length <= 24");
  }
  Dyadic approx(std::uint64_t n, const BitString& s) const override {
    if (s.size() > std::min<std::uint64_t>(n, max_len_)) return Dyadic();
    if (use_k_) return two_pow_minus(sdvm::exact_k(s));
    return round_rational(sdvm::exact_p(s), static_cast<std::int64_t>(n) + 2, Rounding::down);
  }
  std::vector<BitString> support(std::uint64_t n) const override {
    return strings_upto(static_cast<std::size_t>(std::min<std::uint64_t>(n, max_len_)));
  }
  std::optional<Dyadic> upper(std::uint64_t n, const BitString& s) const override {
    if (s.size() > max_len_) return Dyadic();
    if (use_k_) return two_pow_minus(sdvm::exact_k(s));
    return round_rational(sdvm::exact_p(s), static_cast<std::int64_t>(n) + 2, Rounding::up);
  }
  std::string describe() const override {
    return std::string(use_k_ ? "2^-K" : "P") + "_sdvm(|s| <= " + std::to_string(max_len_) + ")";
  }

 private:
  std::size_t max_len_;
  bool use_k_;
};

class ScaledModel final : public LowerSemimeasure::Model {
 public:
  ScaledModel(LowerSemimeasure r, Dyadic c) : r_(std::move(r)), c_(std::move(c)) {}
  Dyadic approx(std::uint64_t n, const BitString& s) const override { return c_ * r_.approx(n, s); }
  std::vector<BitString> support(std::uint64_t n) const override { return r_.support(n); }
  Dyadic mass_cap() const override { return c_ * r_.mass_cap(); }
  std::optional<Dyadic> upper(std::uint64_t n, const BitString& s) const override {
    auto u = r_.upper(n, s);
    if (!u) return std::nullopt;
    return c_ * *u;
  }
  std::string describe() const override { return c_.to_string() + " * " + r_.describe(); }

 private:
  LowerSemimeasure r_;
  Dyadic c_;
};

class MixtureModel final : public LowerSemimeasure::Model {
 public:
  MixtureModel(std::vector<LowerSemimeasure> rs, std::vector<Dyadic> ws) : rs_(std::move(rs)), ws_(std::move(ws)) {}
  Dyadic approx(std::uint64_t n, const BitString& s) const override {
    Dyadic total;
    for (std::size_t i = 0; i < rs_.size(); ++i) total += ws_[i] * rs_[i].approx(n, s);
    return total;
  }
  std::vector<BitString> support(std::uint64_t n) const override {
    std::set<BitString> all;
    for (const auto& r : rs_) {
      for (auto& s : r.support(n)) all.insert(std::move(s));
    }
    return {all.begin(), all.end()};
  }
  Dyadic mass_cap() const override {
    Dyadic total;
    for (std::size_t i = 0; i < rs_.size(); ++i) total += ws_[i] * rs_[i].mass_cap();
    return total;
  }
  std::optional<Dyadic> upper(std::uint64_t n, const BitString& s) const override {
    Dyadic total;
    for (std::size_t i = 0; i < rs_.size(); ++i) {
      auto u = rs_[i].upper(n, s);
      if (!u) return std::nullopt;
      total += ws_[i] * *u;
    }
    return total;
  }
  std::string describe() const override { return "mixture of " + std::to_string(rs_.size()); }

 private:
  std::vector<LowerSemimeasure> rs_;
  std::vector<Dyadic> ws_;
};

class CepsModel final : public LowerSemimeasure::Model {
 public:
  CepsModel(LowerSemimeasure r, unsigned c, DyadicStream theta)
      : r_(std::move(r)), c_(c), theta_(std::move(theta)) {}

  Dyadic approx(std::uint64_t n, const BitString& s) const override {
    if (!s.empty()) return r_.approx(n, s);
    const Dyadic th = theta_(n);
    if (n > 0 && theta_(n - 1) > th) {
      throw PreconditionViolation("theta stream decreases at stage " + std::to_string(n));
    }
    const Dyadic v = th.shifted(-static_cast<std::int64_t>(c_));
    if (v > Dyadic(1)) throw PreconditionViolation("2^-c theta exceeds 1 at stage " + std::to_string(n));
    if (auto u = r_.upper(n, s); u && v > *u) {
      throw PreconditionViolation("2^-c theta(" + std::to_string(n) + ") = " + v.to_string() +
                                  " exceeds the certified bound " + u->to_string() + " on r(lambda)");
    }
    return v;
  }

  std::vector<BitString> support(std::uint64_t n) const override {
    auto sup = r_.support(n);
    if (sup.empty() || !sup.front().empty()) sup.insert(sup.begin(), BitString());
    Dyadic mass;
    for (const auto& s : sup) mass += approx(n, s);
    if (mass > Dyadic(1)) {
      throw PreconditionViolation("stage " + std::to_string(n) + " mass " + mass.to_string() + " exceeds 1");
    }
    return sup;
  }

  Dyadic mass_cap() const override {
    return std::min(Dyadic(1), r_.mass_cap() + Dyadic::pow2(-static_cast<std::int64_t>(c_)));
  }
  std::optional<Dyadic> upper(std::uint64_t n, const BitString& s) const override {
    if (s.empty()) return std::nullopt;
    return r_.upper(n, s);
  }
  std::string describe() const override { return "ceps(" + r_.describe() + ", c=" + std::to_string(c_) + ")"; }

 private:
  LowerSemimeasure r_;
  unsigned c_;
  DyadicStream theta_;
};

class TewcrModel final : public LowerSemimeasure::Model {
 public:
  TewcrModel(LowerSemimeasure m, Dyadic q, std::uint64_t d, Precision prec)
      : m_(std::move(m)), q_(std::move(q)), d_(d), prec_(prec),
        argmax_(kernel_argmax(q_.to_rational(), prec)) {}

  Dyadic approx(std::uint64_t n, const BitString& s) const override {
    // The best certified lower bound over stages 0..n; a later value can
    // come with a slightly looser enclosure than an earlier one.
    Dyadic best;
    std::optional<Dyadic> previous;
    for (std::uint64_t k = 0; k <= n; ++k) {
      Dyadic v = m_.approx(k, s);
      if (previous && v == *previous) continue;
      check_branch(v, k, s);
      if (!v.is_zero()) {
        const Dyadic lo = tsallis_kernel_F(Interval(v), Interval(q_), prec_).lo();
        if (lo > best) best = lo;
      }
      previous = std::move(v);
    }
    return divide(best, Dyadic(static_cast<long>(d_)), static_cast<std::int64_t>(prec_.bits) + 16, Rounding::down);
  }

  std::vector<BitString> support(std::uint64_t n) const override { return m_.support(n); }

  Dyadic mass_cap() const override {
    // F(x) <= x/(q-1)
    const Dyadic bound = divide(m_.mass_cap(), (q_ - Dyadic(1)) * Dyadic(static_cast<long>(d_)),
                                static_cast<std::int64_t>(prec_.bits) + 16, Rounding::up);
    return std::min(Dyadic(1), bound);
  }

  std::optional<Dyadic> upper(std::uint64_t n, const BitString& s) const override {
    auto u = m_.upper(n, s);
    if (!u || *u > argmax_.lo()) return std::nullopt;
    const Dyadic hi = tsallis_kernel_F(Interval(*u), Interval(q_), prec_).hi();
    return divide(hi, Dyadic(static_cast<long>(d_)), static_cast<std::int64_t>(prec_.bits) + 16, Rounding::up);
  }

  std::string describe() const override {
    return "tewcr(" + m_.describe() + ", q=" + q_.to_string() + ", d=" + std::to_string(d_) + ")";
  }

 private:
  void check_branch(const Dyadic& v, std::uint64_t k, const BitString& s) const {
    if (v > argmax_.hi()) {
      throw BranchError("m(\"" + s.to_string() + "\") >= " + v.to_string() + " at stage " + std::to_string(k) +
                        " exceeds q^{1/(1-q)} ~ " + argmax_.to_string(8));
    }
  }

  LowerSemimeasure m_;
  Dyadic q_;
  std::uint64_t d_;
  Precision prec_;
  Interval argmax_;
};

}  // namespace

Dyadic LowerSemimeasure::stage_mass(std::uint64_t n) const {
  Dyadic total;
  for (const auto& s : support(n)) total += approx(n, s);
  return total;
}

std::vector<std::pair<BitString, Dyadic>> LowerSemimeasure::values(std::uint64_t n,
                                                                   std::optional<std::uint64_t> bound) const {
  std::vector<std::pair<BitString, Dyadic>> out;
  for (auto& s : support(n)) {
    if (!index_below(s, bound)) continue;
    Dyadic v = approx(n, s);
    out.emplace_back(std::move(s), std::move(v));
  }
  return out;
}

LowerSemimeasure from_p_hat(std::shared_ptr<const EnumerationHistory> history) {
  return LowerSemimeasure(std::make_shared<PHatModel>(std::move(history)));
}

LowerSemimeasure from_k_hat(std::shared_ptr<const EnumerationHistory> history) {
  return LowerSemimeasure(std::make_shared<KHatModel>(std::move(history)));
}

LowerSemimeasure finite_semimeasure(std::map<BitString, Dyadic> values) {
  return LowerSemimeasure(std::make_shared<FiniteModel>(std::move(values)));
}

LowerSemimeasure sdvm_exact_p(std::size_t max_len) {
  return LowerSemimeasure(std::make_shared<SdvmExactModel>(max_len, false));
}

LowerSemimeasure sdvm_exact_two_pow_minus_k(std::size_t max_len) {
  return LowerSemimeasure(std::make_shared<SdvmExactModel>(max_len, true));
}

LowerSemimeasure scale(const LowerSemimeasure& r, const Dyadic& c) {
  if (c.sign() <= 0 || c > Dyadic(1)) throw ValidationError("scale factor must lie in (0, 1], got " + c.to_string());
  return LowerSemimeasure(std::make_shared<ScaledModel>(r, c));
}

LowerSemimeasure finite_mixture(const std::vector<LowerSemimeasure>& rs, const std::vector<Dyadic>& ws) {
  if (rs.size() != ws.size()) throw WeightError("mixture needs one weight per component");
  if (rs.empty()) throw WeightError("mixture needs at least one component");
  Dyadic total;
  for (const auto& w : ws) {
    if (w.sign() <= 0) throw WeightError("mixture weight " + w.to_string() + " is not positive");
    total += w;
  }
  if (total > Dyadic(1)) throw WeightError("mixture weights sum to " + total.to_string() + " > 1");
  return LowerSemimeasure(std::make_shared<MixtureModel>(rs, ws));
}

LowerSemimeasure ceps_transform(const LowerSemimeasure& r, unsigned c, DyadicStream theta) {
  if (!theta) throw ValidationError("ceps_transform needs a theta stream");
  return LowerSemimeasure(std::make_shared<CepsModel>(r, c, std::move(theta)));
}

LowerSemimeasure tewcr_transform(const LowerSemimeasure& m, const Dyadic& q, std::uint64_t d, Precision prec) {
  if (q <= Dyadic(1)) throw ValidationError("tewcr_transform needs q > 1, got " + q.to_string());
  if (d == 0) throw ValidationError("tewcr_transform needs d >= 1");
  return LowerSemimeasure(std::make_shared<TewcrModel>(m, q, d, prec));
}

DominationReport check_domination(const LowerSemimeasure& r, const LowerSemimeasure& m, const Dyadic& c,
                                  std::uint64_t max_stage, std::optional<std::uint64_t> support_bound) {
  DominationReport rep;
  rep.max_stage = max_stage;
  rep.support_bound = support_bound;
  rep.c = c;
  if (c.sign() <= 0) {
    rep.vacuous = true;
    return rep;
  }
  for (std::uint64_t n = 0; n <= max_stage; ++n) {
    for (const auto& [s, v] : r.values(n, support_bound)) {
      ++rep.pairs_checked;
      const auto u = m.upper(n, s);
      if (!u) continue;
      ++rep.pairs_with_upper;
      if (c * v > *u) {
        rep.violated = true;
        rep.witness = s;
        rep.witness_stage = n;
        return rep;
      }
    }
  }
  return rep;
}

AuditReport audit_contract(const LowerSemimeasure& r, std::uint64_t max_stage) {
  AuditReport rep;
  auto fail = [&](std::uint64_t n, const BitString& s, const std::string& what) {
    rep.violations.push_back("stage " + std::to_string(n) + " \"" + s.to_string() + "\": " + what);
  };
  std::vector<BitString> previous;
  for (std::uint64_t n = 0; n <= max_stage; ++n) {
    const auto sup = r.support(n);
    if (!std::is_sorted(sup.begin(), sup.end()) || std::adjacent_find(sup.begin(), sup.end()) != sup.end()) {
      fail(n, BitString(), "support is not sorted and duplicate-free");
    }
    if (!std::includes(sup.begin(), sup.end(), previous.begin(), previous.end())) {
      fail(n, BitString(), "support shrank");
    }
    Dyadic mass;
    for (const auto& s : sup) {
      const Dyadic v = r.approx(n, s);
      if (v.sign() < 0) fail(n, s, "negative value");
      if (n > 0) {
        const Dyadic before = r.approx(n - 1, s);
        if (before > v) fail(n, s, "value decreased from " + before.to_string() + " to " + v.to_string());
        if (!std::binary_search(previous.begin(), previous.end(), s) && !before.is_zero()) {
          fail(n - 1, s, "nonzero value outside the support");
        }
      }
      mass += v;
    }
    if (mass > Dyadic(1)) fail(n, BitString(), "stage mass " + mass.to_string() + " exceeds 1");
    previous = sup;
    ++rep.stages;
  }
  return rep;
}

}  // namespace ait
