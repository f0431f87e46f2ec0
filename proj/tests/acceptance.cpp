// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when
// any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ait/cli.hpp"
#include "ait/enumeration.hpp"
#include "ait/entropy.hpp"
#include "ait/numerics.hpp"
#include "ait/sdvm.hpp"
#include "oracles.hpp"

using ait::BitString;
using ait::Dyadic;
using ait::Interval;
using ait::Rational;
using oracle::Real;

namespace {

const ait::Precision P64 = ait::Precision::of(64);

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Real r(const Rational& q) { return Real(q.get_num().get_str()) / Real(q.get_den().get_str()); }

std::shared_ptr<const ait::Computer> sdvm() { return ait::machine_by_name("sdvm"); }

// 1. omega after exhausting opcode-length k is 1 - (3/4)^{k+1}
Verdict exact_mass() {
  Verdict v;
  double t10 = 0;
  for (unsigned k = 0; k <= 10; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rs = ait::exact_domain_upto(*sdvm(), 2 * k + 2, k + 1 + (std::uint64_t{1} << k));
    Dyadic omega;
    for (const auto& rec : rs) omega += Dyadic::pow2(-static_cast<std::int64_t>(rec.program.size()));
    if (k == 10) t10 = seconds_since(t0);
    v.require(oracle::to_exact(omega) == oracle::omega_upto(k), "omega mismatch at k=" + std::to_string(k));
  }
  v.require(t10 < 10.0, "k=10 took " + fmt("%.2f s", t10));
  if (v.pass) v.detail = "k=0..10 exact; k=10 in " + fmt("%.2f s", t10);
  return v;
}

// 2. P enclosures and K against exhaustive search
Verdict exact_oracles() {
  Verdict v;
  const auto st = ait::enumerate_to(sdvm(), 24);
  auto check_p = [&](const BitString& s, const oracle::Exact& want) {
    const auto tail = st.p_tail(s);
    v.require(tail.has_value(), "no tail for " + s.to_string());
    if (!tail) return;
    v.require(oracle::to_exact(st.p_hat(s)) <= want && want <= oracle::to_exact(st.p_hat(s) + *tail),
              "P enclosure misses for \"" + s.to_string() + "\"");
  };
  check_p(BitString(), oracle::Exact(1, 3));
  check_p(BitString("0"), oracle::Exact(1, 12));
  check_p(BitString("1"), oracle::Exact(1, 12));
  std::size_t checked = 0;
  for (std::uint64_t i = 0; i < (1u << 7) - 1; ++i) {
    const BitString s = ait::string_at_u64(i);
    const auto k = st.k_hat(s);
    v.require(k && *k == oracle::brute_k(s.to_string()), "k_hat disagrees at \"" + s.to_string() + "\"");
    ++checked;
  }
  if (v.pass) v.detail = "stage 24; 3 P enclosures; k_hat = K on " + std::to_string(checked) + " strings";
  return v;
}

// 3. monotone approximation over 32 stages
Verdict monotone_suite() {
  Verdict v;
  std::size_t violations = 0;
  ait::EnumerationState prev = ait::EnumerationState::initial(sdvm());
  for (int t = 1; t <= 32; ++t) {
    const auto cur = ait::advance_stage(prev);
    if (!(prev.omega_hat() <= cur.omega_hat())) ++violations;
    if (!(prev.theta_hat() <= cur.theta_hat())) ++violations;
    if (!(cur.omega_hat() <= Dyadic(1))) ++violations;
    for (const auto& [s, o] : prev.outputs()) {
      const auto k = cur.k_hat(s);
      if (!k || *k > o.min_len) ++violations;
      if (!(o.mass <= cur.p_hat(s))) ++violations;
    }
    ait::StringSet programs;
    for (const auto& rec : cur.records()) programs.insert(rec.program);
    if (programs.size() != cur.records().size() || !ait::is_prefix_free(programs)) ++violations;
    prev = cur;
  }
  v.require(violations == 0, std::to_string(violations) + " violations");
  if (v.pass) v.detail = "32 stages, " + std::to_string(prev.records().size()) + " records, 0 violations";
  return v;
}

// 4. kernel identities
Verdict kernel_identities() {
  Verdict v;
  std::size_t samples = 0;
  std::size_t violations = 0;
  for (const Rational q : {Rational(3, 2), Rational(2), Rational(3)}) {
    const Interval qi = ait::enclose(q, P64);
    v.require(ait::tsallis_kernel_F(Interval(1), qi, P64) == Interval(0), "F(1) != 0");
    const Interval am = ait::kernel_argmax(q, P64);
    const Interval fm = ait::tsallis_kernel_F(am, qi, P64);
    const Real want = pow(r(q), r(q) / (1 - r(q)));
    v.require(oracle::encloses(fm, want), "F(argmax) misses the max for q=" + q.get_str());
    v.require(fm.width() <= Dyadic::pow2(-40), "F(argmax) too wide for q=" + q.get_str());
    for (int k = 1; k <= 334; ++k) {
      const Dyadic x = divide(Dyadic(k) * am.lo(), Dyadic(334), 80, ait::Rounding::down);
      const Interval f = ait::tsallis_kernel_F(Interval(x), qi, P64);
      const Interval lhs = ait::divide(Interval(x), qi, P64);
      ++samples;
      if (lhs.certainly_greater(f) || !(lhs.lo() <= f.hi())) ++violations;
    }
  }
  v.require(samples >= 1000, "only " + std::to_string(samples) + " samples");
  v.require(violations == 0, std::to_string(violations) + " x/q <= F(x) violations");
  if (v.pass) v.detail = "q in {3/2,2,3}; " + std::to_string(samples) + " samples, 0 violations";
  return v;
}

// 5. Tsallis near q = 1 and the two formulas
Verdict tsallis_shannon() {
  Verdict v;
  const ait::SemiDistribution quarters = {{BitString("0"), Interval(Dyadic(1, -2))},
                                          {BitString("1"), Interval(Dyadic(1, -2))}};
  for (const Rational q : {Rational(99, 100), Rational(101, 100)}) {
    const auto s = ait::tsallis_partial(quarters, ait::enclose(q, P64), P64).cumulative;
    const Real ln2 = log(Real(2));
    v.require(abs(oracle::to_real(s.lo()) - ln2) <= Real(2) / 100 && abs(oracle::to_real(s.hi()) - ln2) <= Real(2) / 100,
              "S_q not within 0.02 of ln 2 at q=" + q.get_str());
  }
  oracle::Gen g(5);
  int agree = 0;
  for (int i = 0; i < 100; ++i) {
    const auto vs = g.semi_distribution(1 + g.below(16), 20);
    ait::SemiDistribution p;
    for (std::size_t k = 0; k < vs.size(); ++k) p.emplace_back(ait::string_at_u64(k), Interval(vs[k]));
    Rational q(static_cast<long>(1 + g.below(300)), 100);
    q.canonicalize();
    if (q == 1) q = Rational(2);
    const auto s = ait::tsallis_partial(p, ait::enclose(q, P64), P64);
    if (s.alternate && s.alternate->overlaps(s.cumulative)) ++agree;
  }
  v.require(agree == 100, std::to_string(agree) + "/100 formula pairs overlap");
  if (v.pass) v.detail = "q=0.99,1.01 within 0.02 of ln 2; 100/100 formula pairs overlap";
  return v;
}

// 6. sqy end to end through the command line
Verdict sqy_end_to_end() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream out;
  std::ostringstream err;
  const int code = ait::run_command({"construct", "sqy", "--q", "2", "--y", "1/4", "--stage", "24", "--precision", "64",
                                     "--format", "json"},
                                    out, err);
  const double secs = seconds_since(t0);
  v.require(code == 0, "exit " + std::to_string(code) + ": " + err.str());
  if (code != 0) return v;
  const auto j = nlohmann::json::parse(out.str());
  auto num = [&](const nlohmann::json& x) { return ait::parse_rational(x.get<std::string>()); };
  const Rational lo = num(j["sq_m"][0]);
  const Rational hi = num(j["sq_m"][1]);
  v.require(lo <= Rational(1, 4) && Rational(1, 4) <= hi, "sq_m misses 1/4");
  v.require(hi - lo <= Rational(1, 1000000), "sq_m wider than 1e-6");
  v.require(num(j["a"][0]) > Rational(1, 2), "a not above 1/2");
  v.require(num(j["a"][1]) < num(j["x0"][0]), "a not below x0");
  v.require(num(j["stage_mass"]) < 1, "stage mass not below 1");
  v.require(secs < 60.0, "took " + fmt("%.1f s", secs));
  if (v.pass) {
    v.detail = "S_2(m) in [" + j["sq_m"][0].get<std::string>() + ", " + j["sq_m"][1].get<std::string>() + "], " +
               fmt("%.2f s", secs);
  }
  return v;
}

// 7. divergence witnesses
Verdict witnesses() {
  Verdict v;
  const auto profile = ait::LengthProfile::sdvm();
  for (const auto& [q, want] : std::vector<std::pair<Rational, unsigned>>{{Rational(1, 4), 5}, {Rational(2, 5), 9}}) {
    const auto w = ait::divergence_witness(profile, q, Rational(10), P64);
    const auto* hit = std::get_if<ait::Witness>(&w);
    v.require(hit != nullptr, "no witness for q=" + q.get_str());
    if (!hit) continue;
    v.require(hit->n == want, "q=" + q.get_str() + " gave N=" + std::to_string(hit->n));
    v.require(oracle::witness_sum(r(q), want) >= 10 && oracle::witness_sum(r(q), want - 1) < 10,
              "direct summation disagrees for q=" + q.get_str());
  }
  v.require(std::holds_alternative<ait::Converges>(ait::divergence_witness(profile, Rational(3, 4), Rational(10), P64)),
            "q=3/4 did not converge");
  if (v.pass) v.detail = "N=5 (q=1/4), N=9 (q=2/5), q=3/4 converges";
  return v;
}

// 8. length-weighted halting sum near 8 at opcode-length 20
Verdict weighted_sum() {
  Verdict v;
  const ait::LengthWeight f = [](std::uint64_t n) { return mpz_class(static_cast<unsigned long>(n)); };
  const ait::StringPredicate all = [](const BitString&) { return true; };
  // enumerated partial sums agree with the series where enumeration is feasible
  for (unsigned k = 0; k <= 10; ++k) {
    const auto rs = ait::exact_domain_upto(*sdvm(), 2 * k + 2, k + 1 + (std::uint64_t{1} << k));
    const Dyadic s = ait::weighted_halting_sum(rs, f, all);
    v.require(oracle::to_exact(s) == oracle::length_weighted_upto(k), "partial sum mismatch at k=" + std::to_string(k));
    v.require(s <= Dyadic(8), "partial sum above 8 at k=" + std::to_string(k));
  }
  const auto at20 = oracle::to_exact(ait::sdvm::length_weighted_upto(20));
  v.require(at20 == oracle::length_weighted_upto(20), "closed form mismatch at k=20");
  v.require(at20 <= 8, "partial sum above 8 at k=20");
  const auto gap = oracle::Exact(8) - at20;
  const double gap_d = static_cast<double>(gap);
  v.require(gap <= oracle::Exact(1, 1000), "8 - S(20) = " + fmt("%.6f", gap_d) + " exceeds 1e-3");
  if (v.pass) v.detail = "8 - S(20) = " + fmt("%.6f", gap_d);
  return v;
}

// 9. k_hat(s) + log2 p_hat(s) >= 0
Verdict kgap() {
  Verdict v;
  std::size_t checked = 0;
  std::size_t violations = 0;
  ait::EnumerationState st = ait::EnumerationState::initial(sdvm());
  for (int t = 0; t <= 24; ++t) {
    if (t > 0) st = ait::advance_stage(st);
    for (const auto& [s, o] : st.outputs()) {
      // p_hat 2^{k_hat} >= 1, exactly
      if (o.mass.shifted(static_cast<std::int64_t>(o.min_len)) < Dyadic(1)) ++violations;
      ++checked;
    }
    if (t % 6 == 0) {
      for (const auto& row : ait::kgap_report(st, std::nullopt, P64).rows) {
        if (row.gap.hi().sign() < 0) ++violations;
      }
    }
  }
  v.require(violations == 0, std::to_string(violations) + " violations");
  if (v.pass) v.detail = std::to_string(checked) + " (stage, string) pairs over stages 0..24, 0 violations";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"sdvm exact mass", exact_mass},
      {"exact oracles", exact_oracles},
      {"monotone approximation", monotone_suite},
      {"kernel identities", kernel_identities},
      {"tsallis to shannon", tsallis_shannon},
      {"sqy construction", sqy_end_to_end},
      {"divergence witness", witnesses},
      {"length-weighted sum", weighted_sum},
      {"kgap invariant", kgap},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %zu: %s  %s (%s)\n", i + 1, v.pass ? "PASS" : "FAIL", criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
