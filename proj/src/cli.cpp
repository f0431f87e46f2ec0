#include "ait/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ait/enumeration.hpp"
#include "ait/entropy.hpp"
#include "ait/errors.hpp"
#include "ait/kernels.hpp"
#include "ait/numerics.hpp"
#include "ait/semimeasure.hpp"

namespace ait {
namespace {

// Flags shared by the subcommands. Options that a subcommand does not
// register keep their defaults.
struct Flags {
  std::string machine = "sdvm";
  std::uint64_t stage = 12;
  unsigned precision = 64;
  std::string format = "csv";
  std::string output;
  std::string cache;
  int jobs = 0;
  std::optional<std::uint64_t> support_bound;
  std::optional<std::uint64_t> max_len;
  std::string q;
  std::string D;
  std::string y;
  std::string a;
  std::string B;
  std::string c;
  std::uint64_t d = 1;
  std::string base = "natural";
  std::string source = "p_hat";
  std::string kind;
  std::string weight = "length";
  std::string sum_over = "programs";
  std::uint64_t min_output_len = 0;
  std::string alpha;
  std::uint64_t slope = 2;
  std::uint64_t intercept = 2;
};

// A tabular result: optional rows, then summary fields.
struct Report {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<std::string, std::string>> summary;
  std::optional<std::string> raw_json;  // replaces the generic JSON layout
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void write_csv_line(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << csv_field(fields[i]);
  }
  os << '\n';
}

std::string render(const Report& r, const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    if (r.raw_json) {
      nlohmann::ordered_json j;
      j["version"] = kVersion;
      j["command"] = r.command;
      const auto body = nlohmann::ordered_json::parse(*r.raw_json);
      for (const auto& [k, v] : body.items()) j[k] = v;
      return j.dump(2) + "\n";
    }
    nlohmann::ordered_json j;
    j["version"] = kVersion;
    j["command"] = r.command;
    if (!r.columns.empty()) {
      auto rows = nlohmann::ordered_json::array();
      for (const auto& row : r.rows) {
        nlohmann::ordered_json o;
        for (std::size_t i = 0; i < r.columns.size(); ++i) o[r.columns[i]] = row[i];
        rows.push_back(std::move(o));
      }
      j["rows"] = std::move(rows);
    }
    for (const auto& [k, v] : r.summary) j[k] = v;
    os << j.dump(2) << '\n';
    return os.str();
  }
  os << "# ait " << kVersion << ' ' << r.command << '\n';
  if (!r.columns.empty()) {
    write_csv_line(os, r.columns);
    for (const auto& row : r.rows) write_csv_line(os, row);
  }
  if (!r.summary.empty()) {
    std::vector<std::string> keys;
    std::vector<std::string> values;
    for (const auto& [k, v] : r.summary) {
      keys.push_back(k);
      values.push_back(v);
    }
    write_csv_line(os, keys);
    write_csv_line(os, values);
  }
  return os.str();
}

Rational parse_number(const std::string& text, const std::string& flag) {
  if (text.empty()) throw ValidationError(flag + " is required");
  try {
    return parse_rational(text);
  } catch (const ValidationError& e) {
    throw ValidationError(flag + ": " + e.what());
  }
}

Dyadic parse_dyadic(const std::string& text, const std::string& flag) {
  const Rational q = parse_number(text, flag);
  auto d = as_dyadic(q);
  if (!d) throw ValidationError(flag + " must be a dyadic rational (k/2^j), got " + text);
  return *d;
}

BitString parse_bits(const std::string& text, const std::string& flag) {
  try {
    return BitString(text);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(flag + ": " + e.what());
  }
}

std::string dec(const Dyadic& x, int digits, Rounding dir) { return x.to_decimal(digits, dir); }

class Context {
 public:
  explicit Context(const Flags& f) : f_(f), prec_(Precision::of(f.precision)), digits_(decimal_digits(prec_)) {
    if (f.format != "csv" && f.format != "json") throw ValidationError("--format must be csv or json");
    if (f.jobs < 0) throw ValidationError("--jobs must be nonnegative");
    set_worker_count(f.jobs);
  }

  [[nodiscard]] Precision prec() const { return prec_; }
  [[nodiscard]] int digits() const { return digits_; }
  [[nodiscard]] const Flags& flags() const { return f_; }

  std::shared_ptr<const Computer> machine() const { return machine_by_name(f_.machine); }

  std::optional<std::filesystem::path> cache_path() const {
    if (!f_.cache.empty()) return std::filesystem::path(f_.cache);
    if (const char* dir = std::getenv("AIT_CACHE_DIR"); dir != nullptr && *dir != '\0') {
      return std::filesystem::path(dir) / (f_.machine + ".csv");
    }
    return std::nullopt;
  }

  /// Enumeration at --stage, reusing and refreshing the cache when there is one.
  EnumerationState state() const {
    auto m = machine();
    const auto path = cache_path();
    EnumerationState st = EnumerationState::initial(m);
    if (path && std::filesystem::exists(*path)) {
      EnumerationState cached = load_records(*path, m);
      if (cached.stage() > f_.stage) {
        // rewind from the cached records; the larger cache stays on disk
        std::vector<HaltRecord> keep;
        for (const auto& r : cached.records()) {
          if (r.discovery_stage() <= f_.stage) keep.push_back(r);
        }
        return EnumerationState::from_records(m, f_.stage, std::move(keep));
      }
      st = cached;
    }
    const bool advanced = st.stage() < f_.stage;
    st = advance_to(st, f_.stage);
    if (path && advanced) {
      if (path->has_parent_path()) std::filesystem::create_directories(path->parent_path());
      persist_records(st, *path);
    }
    return st;
  }

  std::string iv(const Interval& x) const {
    return dec(x.lo(), digits_, Rounding::down) + ".." + dec(x.hi(), digits_, Rounding::up);
  }

 private:
  const Flags& f_;
  Precision prec_;
  int digits_;
};

bool in_bound(const BitString& s, std::optional<std::uint64_t> bound) {
  return !bound || (s.size() < 64 && index_of_u64(s) < *bound);
}

Report cmd_enumerate(const Context& cx) {
  const auto st = cx.state();
  Report r{"enumerate", {}, {}, {}, {}};
  r.summary = {{"machine", st.machine().name()},
               {"stage", std::to_string(st.stage())},
               {"records", std::to_string(st.records().size())},
               {"outputs", std::to_string(st.outputs().size())},
               {"omega_hat", st.omega_hat().to_string()},
               {"theta_hat", st.theta_hat().to_string()}};
  return r;
}

Report cmd_ptable(const Context& cx, bool k_table) {
  const auto st = cx.state();
  const auto& f = cx.flags();
  Report r{k_table ? "ktable" : "ptable", {}, {}, {}, {}};
  if (k_table) {
    r.columns = {"s", "k_hat", "programs"};
  } else {
    r.columns = {"s", "p_hat", "p_hat_decimal", "p_upper"};
  }
  for (const auto& [s, o] : st.outputs()) {
    if (!in_bound(s, f.support_bound)) continue;
    if (f.max_len && s.size() > *f.max_len) continue;
    if (k_table) {
      r.rows.push_back({s.to_string(), std::to_string(o.min_len), std::to_string(o.programs)});
    } else {
      const auto tail = st.p_tail(s);
      r.rows.push_back({s.to_string(), o.mass.to_string(), dec(o.mass, cx.digits(), Rounding::down),
                        tail ? dec(o.mass + *tail, cx.digits(), Rounding::up) : ""});
    }
  }
  r.summary = {{"machine", st.machine().name()}, {"stage", std::to_string(st.stage())}};
  return r;
}

Report cmd_omega(const Context& cx) {
  const auto st = cx.state();
  Report r{"omega", {}, {}, {}, {}};
  r.summary = {{"machine", st.machine().name()},
               {"stage", std::to_string(st.stage())},
               {"omega_hat", st.omega_hat().to_string()},
               {"omega_hat_decimal", dec(st.omega_hat(), cx.digits(), Rounding::down)}};
  return r;
}

Report cmd_theta(const Context& cx) {
  const auto st = cx.state();
  const auto& f = cx.flags();
  Report r{"theta", {}, {}, {}, {}};
  r.summary = {{"machine", st.machine().name()}, {"stage", std::to_string(st.stage())}};
  if (f.D.empty()) {
    r.summary.emplace_back("theta_hat", st.theta_hat().to_string());
    r.summary.emplace_back("theta_hat_decimal", dec(st.theta_hat(), cx.digits(), Rounding::down));
  } else {
    const Rational D = parse_number(f.D, "--D");
    if (D <= 0) throw ValidationError("--D must be positive");
    const Interval t = theta_D_hat(st, D, cx.prec());
    r.summary.emplace_back("D", D.get_str());
    r.summary.emplace_back("theta_D_lo", dec(t.lo(), cx.digits(), Rounding::down));
    r.summary.emplace_back("theta_D_hi", dec(t.hi(), cx.digits(), Rounding::up));
    r.summary.emplace_back("machine_relative", D > 1 ? "D > 1: bounded here only because the machine is not optimal"
                                                     : "yes");
  }
  return r;
}

LowerSemimeasure source_semimeasure(const Context& cx, const EnumerationState& st) {
  auto h = std::make_shared<const EnumerationHistory>(st);
  if (cx.flags().source == "p_hat") return from_p_hat(h);
  if (cx.flags().source == "k_hat") return from_k_hat(h);
  throw ValidationError("--source must be p_hat or k_hat");
}

Report series_report(const Context& cx, const std::string& command, const PartialSumSeries& s) {
  Report r{command, {"s", "term_lo", "term_hi"}, {}, {}, {}};
  for (const auto& [str, t] : s.terms) {
    r.rows.push_back({str.to_string(), dec(t.lo(), cx.digits(), Rounding::down), dec(t.hi(), cx.digits(), Rounding::up)});
  }
  r.summary = {{"cumulative_lo", dec(s.cumulative.lo(), cx.digits(), Rounding::down)},
               {"cumulative_hi", dec(s.cumulative.hi(), cx.digits(), Rounding::up)},
               {"tail_bound", s.tail_bound ? dec(*s.tail_bound, cx.digits(), Rounding::up) : ""}};
  return r;
}

Interval q_interval(const Context& cx, const std::string& text) {
  return enclose(parse_number(text, "--q"), cx.prec().plus(8));
}

Report cmd_entropy(const Context& cx) {
  const auto& f = cx.flags();
  // Validate everything before enumerating.
  std::optional<Interval> q;
  if (f.kind == "tsallis" || f.kind == "powersum") {
    const Rational qr = parse_number(f.q, "--q");
    if (qr <= 0) throw ValidationError("q must be positive");
    if (f.kind == "tsallis" && qr == 1) throw ValidationError("q must exclude 1");
    q = q_interval(cx, f.q);
  }
  if (f.kind == "shannon" && f.base != "natural" && f.base != "binary") {
    throw ValidationError("--base must be natural or binary");
  }
  const auto st = cx.state();
  const auto r = source_semimeasure(cx, st);
  PartialSumSeries s;
  if (f.kind == "shannon") {
    s = shannon_partial(r, st.stage(), f.support_bound, f.base == "binary" ? LogBase::binary : LogBase::natural,
                        cx.prec());
  } else if (f.kind == "tsallis") {
    s = tsallis_partial(r, st.stage(), f.support_bound, *q, cx.prec());
  } else {
    s = power_sum_partial(r, st.stage(), f.support_bound, *q, cx.prec());
  }
  return series_report(cx, f.kind == "shannon" ? "entropy shannon " + f.base : "entropy " + f.kind, s);
}

Report cmd_weighted_sum(const Context& cx) {
  const auto& f = cx.flags();
  LengthWeight w;
  if (f.weight == "length") {
    w = [](std::uint64_t n) { return mpz_class(static_cast<unsigned long>(n)); };
  } else if (f.weight == "one") {
    w = [](std::uint64_t) { return mpz_class(1); };
  } else {
    throw ValidationError("--f must be length or one");
  }
  if (f.sum_over != "programs" && f.sum_over != "strings") throw ValidationError("--over must be programs or strings");
  const std::uint64_t min_len = f.min_output_len;
  const StringPredicate A = [min_len](const BitString& s) { return s.size() >= min_len; };
  const auto st = cx.state();
  const Dyadic total = f.sum_over == "programs" ? weighted_halting_sum(st, w, A) : weighted_k_sum(st, w, A);
  Report r{"weighted-sum", {}, {}, {}, {}};
  r.summary = {{"machine", st.machine().name()},
               {"stage", std::to_string(st.stage())},
               {"over", f.sum_over},
               {"f", f.weight},
               {"sum", total.to_string()},
               {"sum_decimal", dec(total, cx.digits(), Rounding::down)},
               {"caveat", "machine-relative: divergence needs an optimal machine"}};
  return r;
}

Report cmd_witness(const Context& cx) {
  const auto& f = cx.flags();
  const Rational q = parse_number(f.q, "--q");
  const Rational B = parse_number(f.B, "--B");
  if (q <= 0) throw ValidationError("q must be positive");
  if (B <= 0) throw ValidationError("B must be positive");
  const auto result = divergence_witness(LengthProfile{f.slope, f.intercept}, q, B, cx.prec());
  Report r{"witness", {}, {}, {}, {}};
  r.summary = {{"q", q.get_str()}, {"B", B.get_str()}};
  if (const auto* w = std::get_if<Witness>(&result)) {
    r.summary.emplace_back("verdict", "exceeds");
    r.summary.emplace_back("N", std::to_string(w->n));
    r.summary.emplace_back("bound_at_N", cx.iv(w->bound_at_n));
    r.summary.emplace_back("bound_before", cx.iv(w->bound_before));
  } else {
    r.summary.emplace_back("verdict", "converges");
    r.summary.emplace_back("N", "");
    r.summary.emplace_back("term_ratio", cx.iv(std::get<Converges>(result).ratio));
  }
  r.summary.emplace_back("caveat", "machine-relative length profile");
  return r;
}

Report cmd_deficiency(const Context& cx) {
  const auto& f = cx.flags();
  const BitString alpha = parse_bits(f.alpha, "--alpha");
  const Rational D = parse_number(f.D.empty() ? "1" : f.D, "--D");
  if (D < 0 || D > 1) throw ValidationError("--D must lie in [0, 1]");
  const auto st = cx.state();
  const auto p = deficiency_profile(st, alpha, D);
  Report r{"deficiency", {"n", "k_hat", "slack"}, {}, {}, {}};
  for (std::size_t n = 1; n <= p.N; ++n) {
    const auto k = st.k_hat(alpha.prefix(n));
    r.rows.push_back({std::to_string(n), k ? std::to_string(*k) : "inf",
                      p.slacks[n - 1] ? p.slacks[n - 1]->get_str() : "inf"});
  }
  r.summary = {{"D", D.get_str()},
               {"stage", std::to_string(st.stage())},
               {"min_slack", p.min_slack ? p.min_slack->get_str() : "inf"}};
  return r;
}

Report cmd_kgap(const Context& cx) {
  const auto st = cx.state();
  const auto k = kgap_report(st, cx.flags().support_bound, cx.prec());
  Report r{"kgap", {"s", "k_hat", "neg_log2_p_lo", "neg_log2_p_hi", "gap_lo", "gap_hi"}, {}, {}, {}};
  for (const auto& row : k.rows) {
    r.rows.push_back({row.s.to_string(), std::to_string(row.k_hat), dec(row.neg_log2_p.lo(), cx.digits(), Rounding::down),
                      dec(row.neg_log2_p.hi(), cx.digits(), Rounding::up), dec(row.gap.lo(), cx.digits(), Rounding::down),
                      dec(row.gap.hi(), cx.digits(), Rounding::up)});
  }
  r.summary = {{"stage", std::to_string(st.stage())},
               {"min_gap_lo", k.min_gap ? dec(k.min_gap->lo(), cx.digits(), Rounding::down) : ""},
               {"max_gap_hi", k.max_gap ? dec(k.max_gap->hi(), cx.digits(), Rounding::up) : ""}};
  return r;
}

Report values_report(const Context& cx, const std::string& command, const LowerSemimeasure& m, std::uint64_t stage) {
  Report r{command, {"s", "value"}, {}, {}, {}};
  Dyadic mass;
  for (const auto& [s, v] : m.values(stage, cx.flags().support_bound)) {
    r.rows.push_back({s.to_string(), dec(v, cx.digits(), Rounding::down)});
  }
  mass = m.stage_mass(stage);
  r.summary = {{"stage", std::to_string(stage)}, {"stage_mass", dec(mass, cx.digits(), Rounding::up)}};
  return r;
}

Report cmd_construct(const Context& cx) {
  const auto& f = cx.flags();
  if (f.kind == "ceps") {
    const Rational c = parse_number(f.c.empty() ? "" : f.c, "--c");
    if (c < 0 || c.get_den() != 1 || c > 4096) throw ValidationError("--c must be a natural number");
    const auto st = cx.state();
    auto h = std::make_shared<const EnumerationHistory>(st);
    const unsigned cc = static_cast<unsigned>(c.get_num().get_ui());
    const auto m = ceps_transform(from_p_hat(h), cc, [h](std::uint64_t n) { return h->theta_hat(n); });
    auto r = values_report(cx, "construct ceps", m, st.stage());
    r.summary.emplace_back("c", std::to_string(cc));
    const Dyadic lambda_value = m.approx(st.stage(), BitString());
    r.summary.emplace_back("m_lambda", lambda_value.to_string());
    return r;
  }
  if (f.kind == "tewcr") {
    const Dyadic q = parse_dyadic(f.q, "--q");
    if (q <= Dyadic(1)) throw ValidationError("--q must exceed 1");
    if (f.d == 0) throw ValidationError("--d must be at least 1");
    const auto st = cx.state();
    auto h = std::make_shared<const EnumerationHistory>(st);
    const auto m = tewcr_transform(from_p_hat(h), q, f.d, cx.prec());
    auto r = values_report(cx, "construct tewcr", m, st.stage());
    r.summary.emplace_back("q", q.to_string());
    r.summary.emplace_back("d", std::to_string(f.d));
    return r;
  }
  if (f.kind == "sqy" || f.kind == "sqy-thetaD") {
    const Dyadic q = parse_dyadic(f.q, "--q");
    if (q <= Dyadic(1)) throw ValidationError("--q must exceed 1");
    const Interval kmax = kernel_max(q.to_rational(), cx.prec());
    YStream y;
    std::shared_ptr<const EnumerationHistory> h;
    if (f.kind == "sqy") {
      const Dyadic yv = parse_dyadic(f.y, "--y");
      if (yv.sign() <= 0 || yv > kmax.hi()) {
        throw ValidationError("--y must lie in (0, q^{q/(1-q)}] ~ (0, " + kmax.to_string(12) + "]");
      }
      h = std::make_shared<const EnumerationHistory>(cx.state());
      y = YStream::constant(yv);
    } else {
      const Dyadic a = parse_dyadic(f.a, "--a");
      if (a.sign() <= 0 || a > kmax.hi()) throw ValidationError("--a must lie in (0, q^{q/(1-q)}]");
      const Rational D = parse_number(f.D.empty() ? "1" : f.D, "--D");
      if (D <= 0 || D > 1) throw ValidationError("--D must lie in (0, 1]");
      h = std::make_shared<const EnumerationHistory>(cx.state());
      const Precision p = cx.prec();
      const std::uint64_t T = h->horizon();
      // y = a (1 - theta^D): theta_D_hat(n) climbs, so a (1 - its lower edge) falls.
      y.upper = [h, a, D, p](std::uint64_t n) {
        return a * (Dyadic(1) - theta_D_hat(*h, n, D, p).lo());
      };
      const auto gap = theta_D_gap(*h, T, D);
      if (!gap) throw ValidationError("no certified theta^D bound for machine " + h->machine().name());
      y.floor = a * (Dyadic(1) - theta_D_hat(*h, T, D, p).hi() - *gap);
      if (y.floor.sign() <= 0) throw RangeError("stage too small to certify y > 0; raise --stage");
    }
    const auto res = sqy_construct(from_p_hat(h), q, y, cx.prec(), h->horizon(), f.support_bound);
    const auto& rep = res.report;
    Report r{"construct " + f.kind, {}, {}, {}, rep.to_json(cx.digits())};
    r.summary = {{"q", rep.q.to_string()},
                 {"y_hi", rep.y_hi.to_string()},
                 {"y_floor", rep.y_floor.to_string()},
                 {"c", rep.c.to_string()},
                 {"x0", cx.iv(rep.x0)},
                 {"theta", cx.iv(rep.theta)},
                 {"a", cx.iv(rep.a)},
                 {"sq_m", cx.iv(rep.sq_m)},
                 {"sq_m_naive", cx.iv(rep.sq_m_naive)},
                 {"stage_mass", dec(rep.stage_mass, cx.digits(), Rounding::up)},
                 {"stage", std::to_string(rep.stage)},
                 {"support_bound", rep.support_bound ? std::to_string(*rep.support_bound) : ""}};
    return r;
  }
  throw ValidationError("unknown construction \"" + f.kind + "\"");
}

void add_precision(CLI::App* app, Flags& f) {
  app->add_option("--precision", f.precision, "fractional bits of the enclosures")->capture_default_str();
  app->add_option("--format", f.format, "csv or json")->capture_default_str();
  app->add_option("--output", f.output, "write to this file instead of stdout");
  app->add_option("--jobs", f.jobs, "worker threads (0 = all cores)");
}

void add_enumeration(CLI::App* app, Flags& f) {
  app->add_option("--machine", f.machine, "sdvm or spinner")->capture_default_str();
  app->add_option("--stage", f.stage, "dovetailing stage")->capture_default_str();
  app->add_option("--cache", f.cache, "record cache CSV (default $AIT_CACHE_DIR/<machine>.csv)");
  add_precision(app, f);
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Flags f;
  CLI::App app{"Desk-scale algorithmic information theory toolkit", "ait"};
  app.set_version_flag("--version", std::string("ait ") + kVersion);
  app.require_subcommand(1);

  std::function<Report(const Context&)> action;

  auto* enumerate = app.add_subcommand("enumerate", "advance the dovetailed enumeration and update the cache");
  add_enumeration(enumerate, f);
  enumerate->callback([&] { action = cmd_enumerate; });

  auto* ptable = app.add_subcommand("ptable", "p_hat for every output found");
  add_enumeration(ptable, f);
  ptable->add_option("--support-bound", f.support_bound, "only strings with index below this");
  ptable->add_option("--max-len", f.max_len, "only strings up to this length");
  ptable->callback([&] { action = [](const Context& cx) { return cmd_ptable(cx, false); }; });

  auto* ktable = app.add_subcommand("ktable", "k_hat for every output found");
  add_enumeration(ktable, f);
  ktable->add_option("--support-bound", f.support_bound, "only strings with index below this");
  ktable->add_option("--max-len", f.max_len, "only strings up to this length");
  ktable->callback([&] { action = [](const Context& cx) { return cmd_ptable(cx, true); }; });

  auto* omega = app.add_subcommand("omega", "halting mass found so far");
  add_enumeration(omega, f);
  omega->callback([&] { action = cmd_omega; });

  auto* theta = app.add_subcommand("theta", "sum of 2^{-k_hat}, or 2^{-k_hat/D} with --D");
  add_enumeration(theta, f);
  theta->add_option("--D", f.D, "exponent divisor D > 0");
  theta->callback([&] { action = cmd_theta; });

  auto* entropy = app.add_subcommand("entropy", "certified partial sums over p_hat (or 2^{-k_hat})");
  add_enumeration(entropy, f);
  entropy->add_option("kind", f.kind, "shannon, tsallis or powersum")
      ->required()
      ->check(CLI::IsMember({"shannon", "tsallis", "powersum"}));
  entropy->add_option("--q", f.q, "exponent q");
  entropy->add_option("--base", f.base, "natural or binary (shannon)")->capture_default_str();
  entropy->add_option("--source", f.source, "p_hat or k_hat")->capture_default_str();
  entropy->add_option("--support-bound", f.support_bound, "only strings with index below this");
  entropy->callback([&] { action = cmd_entropy; });

  auto* weighted = app.add_subcommand("weighted-sum", "sum f(|p|) 2^{-|p|} or f(k_hat) 2^{-k_hat}");
  add_enumeration(weighted, f);
  weighted->add_option("--f", f.weight, "length (f(n) = n) or one")->capture_default_str();
  weighted->add_option("--over", f.sum_over, "programs or strings")->capture_default_str();
  weighted->add_option("--min-output-len", f.min_output_len, "only outputs at least this long");
  weighted->callback([&] { action = cmd_weighted_sum; });

  auto* witness = app.add_subcommand("witness", "certified N where the power-sum lower bound passes B");
  add_precision(witness, f);
  witness->add_option("--q", f.q, "exponent q > 0")->required();
  witness->add_option("--B", f.B, "target B > 0")->required();
  witness->add_option("--slope", f.slope, "length profile g(n) = slope n + intercept")->capture_default_str();
  witness->add_option("--intercept", f.intercept, "length profile intercept")->capture_default_str();
  witness->callback([&] { action = cmd_witness; });

  auto* deficiency = app.add_subcommand("deficiency", "k_hat(alpha_n) - D n along a prefix");
  add_enumeration(deficiency, f);
  deficiency->add_option("--alpha", f.alpha, "bit string")->required();
  deficiency->add_option("--D", f.D, "rate D in [0, 1]");
  deficiency->callback([&] { action = cmd_deficiency; });

  auto* kgap = app.add_subcommand("kgap", "k_hat(s) + log2 p_hat(s) per string");
  add_enumeration(kgap, f);
  kgap->add_option("--support-bound", f.support_bound, "only strings with index below this");
  kgap->callback([&] { action = cmd_kgap; });

  auto* construct = app.add_subcommand("construct", "run a semimeasure construction over p_hat");
  add_enumeration(construct, f);
  construct->add_option("kind", f.kind, "ceps, tewcr, sqy or sqy-thetaD")
      ->required()
      ->check(CLI::IsMember({"ceps", "tewcr", "sqy", "sqy-thetaD"}));
  construct->add_option("--q", f.q, "exponent q > 1 (dyadic)");
  construct->add_option("--y", f.y, "target y (sqy)");
  construct->add_option("--a", f.a, "scale a (sqy-thetaD)");
  construct->add_option("--D", f.D, "theta^D exponent (sqy-thetaD)");
  construct->add_option("--c", f.c, "shift exponent c (ceps)");
  construct->add_option("--d", f.d, "divisor d (tewcr)")->capture_default_str();
  construct->add_option("--support-bound", f.support_bound, "only strings with index below this");
  construct->callback([&] { action = cmd_construct; });

  std::vector<const char*> argv{"ait"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  try {
    const Context cx(f);
    const std::string text = render(action(cx), f.format);
    if (f.output.empty()) {
      out << text;
    } else {
      std::ofstream file(f.output, std::ios::binary | std::ios::trunc);
      if (!file) throw IoError("cannot write " + f.output);
      file << text;
      if (!file) throw IoError("write failed for " + f.output);
    }
    return 0;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace ait
