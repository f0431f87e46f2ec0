#include "ait/enumeration.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "ait/errors.hpp"

namespace ait {
namespace {

constexpr std::size_t kSplitDepth = 10;

Dyadic weight(std::uint64_t len) { return Dyadic::pow2(-static_cast<std::int64_t>(len)); }

// Serial pass down to a fixed depth, then the subtrees in parallel, so that a
// single root still spreads over the workers.
Exploration explore_split(const Computer& machine, std::size_t max_len, Steps budget, Exec exec) {
  const std::size_t depth = std::min(max_len, kSplitDepth);
  Exploration top = explore(machine, {BitString()}, depth, budget, Exec::serial);
  if (depth == max_len) return top;
  std::vector<BitString> roots;
  Exploration out;
  out.records = std::move(top.records);
  out.nodes = top.nodes;
  for (auto& p : top.pending) {
    if (p.reason == Pending::needs_input) {
      roots.push_back(std::move(p.prefix));
    } else {
      out.pending.push_back(std::move(p));
    }
  }
  Exploration below = explore(machine, roots, max_len, budget, exec);
  // The split roots get visited twice; count them once.
  out.nodes += below.nodes - roots.size();
  std::vector<HaltRecord> records;
  records.reserve(out.records.size() + below.records.size());
  std::merge(std::make_move_iterator(out.records.begin()), std::make_move_iterator(out.records.end()),
             std::make_move_iterator(below.records.begin()), std::make_move_iterator(below.records.end()),
             std::back_inserter(records), by_program);
  out.records = std::move(records);
  std::move(below.pending.begin(), below.pending.end(), std::back_inserter(out.pending));
  std::sort(out.pending.begin(), out.pending.end(),
            [](const PendingPrefix& a, const PendingPrefix& b) { return a.prefix < b.prefix; });
  return out;
}

std::uint64_t parse_u64(std::string_view text, const std::string& what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw FormatError("bad " + what + " \"" + std::string(text) + "\"");
  }
  return v;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

}  // namespace

EnumerationState EnumerationState::build(std::shared_ptr<const Computer> machine, std::uint64_t stage,
                                         std::vector<HaltRecord> records,
                                         std::optional<std::vector<PendingPrefix>> pending,
                                         std::size_t nodes) {
  auto d = std::make_shared<Data>();
  d->machine = std::move(machine);
  d->stage = stage;
  d->pending = std::move(pending);
  d->nodes = nodes;
  // Group the masses by length first: far fewer big-number additions.
  std::map<std::uint64_t, std::uint64_t> per_length;
  for (const auto& r : records) {
    ++per_length[r.program.size()];
    auto [it, fresh] = d->outputs.try_emplace(r.output);
    OutputStats& o = it->second;
    if (fresh || r.program.size() < o.min_len) o.min_len = r.program.size();
    o.mass += weight(r.program.size());
    ++o.programs;
  }
  for (const auto& [len, count] : per_length) {
    d->omega += Dyadic(mpz_class(static_cast<unsigned long>(count)), -static_cast<std::int64_t>(len));
  }
  for (const auto& [s, o] : d->outputs) d->theta += weight(o.min_len);
  d->records = std::move(records);
  return EnumerationState(std::move(d));
}

EnumerationState EnumerationState::initial(std::shared_ptr<const Computer> machine) {
  if (!machine) throw ValidationError("no machine given");
  return build(std::move(machine), 0, {}, std::vector<PendingPrefix>{{BitString(), Pending::needs_input}}, 0);
}

EnumerationState EnumerationState::from_records(std::shared_ptr<const Computer> machine,
                                                std::uint64_t stage, std::vector<HaltRecord> records) {
  if (!machine) throw ValidationError("no machine given");
  std::sort(records.begin(), records.end(), by_program);
  const auto dup = std::adjacent_find(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return a.program == b.program;
  });
  if (dup != records.end()) throw FormatError("duplicate program \"" + dup->program.to_string() + "\"");
  if (stage == 0 && records.empty()) return initial(std::move(machine));
  return build(std::move(machine), stage, std::move(records), std::nullopt, 0);
}

std::optional<std::uint64_t> EnumerationState::k_hat(const BitString& s) const {
  const auto it = data_->outputs.find(s);
  if (it == data_->outputs.end()) return std::nullopt;
  return it->second.min_len;
}

Dyadic EnumerationState::p_hat(const BitString& s) const {
  const auto it = data_->outputs.find(s);
  return it == data_->outputs.end() ? Dyadic() : it->second.mass;
}

std::optional<Dyadic> EnumerationState::p_tail(const BitString& s) const {
  return data_->machine->missing_mass_bound(s, data_->stage);
}

bool operator==(const EnumerationState& a, const EnumerationState& b) {
  return a.machine().name() == b.machine().name() && a.stage() == b.stage() && a.records() == b.records();
}

EnumerationState advance_stage(const EnumerationState& st, Exec exec) {
  const std::uint64_t next = st.stage() + 1;
  const Computer& m = st.machine();
  if (!st.pending()) {
    // Frontier unknown (loaded from a cache): rebuild it from the root.
    Exploration fresh = explore_split(m, next, next, exec);
    if (!std::includes(fresh.records.begin(), fresh.records.end(), st.records().begin(), st.records().end(),
                       by_program)) {
      throw FormatError("cached records are not the stage-" + std::to_string(st.stage()) + " records of " +
                        m.name());
    }
    return EnumerationState::build(st.machine_ptr(), next, std::move(fresh.records), std::move(fresh.pending),
                                   fresh.nodes);
  }
  std::vector<BitString> roots;
  roots.reserve(st.pending()->size());
  for (const auto& p : *st.pending()) roots.push_back(p.prefix);
  Exploration grown = explore(m, roots, next, next, exec);
  std::vector<HaltRecord> records;
  records.reserve(st.records().size() + grown.records.size());
  std::merge(st.records().begin(), st.records().end(), std::make_move_iterator(grown.records.begin()),
             std::make_move_iterator(grown.records.end()), std::back_inserter(records), by_program);
  return EnumerationState::build(st.machine_ptr(), next, std::move(records), std::move(grown.pending),
                                 grown.nodes);
}

EnumerationState advance_to(const EnumerationState& st, std::uint64_t stage, Exec exec) {
  if (stage < st.stage()) {
    throw ValidationError("cannot go back from stage " + std::to_string(st.stage()) + " to " +
                          std::to_string(stage));
  }
  EnumerationState cur = st;
  while (cur.stage() < stage) cur = advance_stage(cur, exec);
  return cur;
}

std::vector<HaltRecord> exact_domain_upto(const Computer& machine, std::size_t max_len, Steps budget,
                                          Exec exec) {
  if (budget < 1) throw ValidationError("exact_domain_upto: budget must be at least 1");
  Exploration e = explore_split(machine, max_len, budget, exec);
  for (const auto& p : e.pending) {
    if (p.reason == Pending::out_of_budget) {
      throw BudgetInsufficient("\"" + p.prefix.to_string() + "\" is still running after " +
                               std::to_string(budget) + " steps");
    }
  }
  return std::move(e.records);
}

void persist_records(const EnumerationState& st, const std::filesystem::path& path) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << st.machine().name() << ',' << st.stage() << '\n';
    for (const auto& r : st.records()) {
      out << r.program.to_string() << ',' << r.output.to_string() << ',' << r.steps << '\n';
    }
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

EnumerationState load_records(const std::filesystem::path& path, std::shared_ptr<const Computer> machine) {
  if (!machine) throw ValidationError("no machine given");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": missing header line");
  const auto head = split_fields(line);
  if (head.size() != 2) throw FormatError(path.string() + ": header must be \"machine,stage\"");
  if (head[0] != machine->name()) {
    throw MismatchError(path.string() + " holds records of machine \"" + std::string(head[0]) +
                        "\", not \"" + machine->name() + "\"");
  }
  const std::uint64_t stage = parse_u64(head[1], "stage");

  std::vector<HaltRecord> records;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno) + ": ";
    const auto f = split_fields(line);
    if (f.size() != 3) throw FormatError(where + "expected program,output,steps");
    HaltRecord r;
    try {
      r.program = BitString(f[0]);
      r.output = BitString(f[1]);
    } catch (const std::invalid_argument& e) {
      throw FormatError(where + e.what());
    }
    r.steps = parse_u64(f[2], "step count");
    if (r.discovery_stage() > stage) throw FormatError(where + "record lies beyond stage " + std::to_string(stage));
    Outcome o;
    try {
      o = run(*machine, r.program, std::max<Steps>(r.steps, 1));
    } catch (const DomainViolation& e) {
      throw FormatError(where + e.what());
    }
    const auto* h = std::get_if<Halted>(&o);
    if (h == nullptr || h->output != r.output || h->steps != r.steps) {
      throw FormatError(where + "\"" + r.program.to_string() + "\" is not a halting program of " +
                        machine->name() + " with this output and step count");
    }
    records.push_back(std::move(r));
  }
  return EnumerationState::from_records(std::move(machine), stage, std::move(records));
}

EnumerationHistory::EnumerationHistory(const EnumerationState& horizon)
    : machine_(horizon.machine_ptr()), horizon_(horizon.stage()) {
  const std::size_t T = static_cast<std::size_t>(horizon_);
  std::vector<Dyadic> omega_delta(T + 1);
  std::vector<Dyadic> theta_delta(T + 1);

  std::map<BitString, std::vector<std::pair<std::uint64_t, std::uint64_t>>> grouped;
  for (const auto& r : horizon.records()) {
    grouped[r.output].emplace_back(std::min<std::uint64_t>(r.discovery_stage(), horizon_), r.program.size());
  }
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> omega_counts;
  for (auto& [s, entries] : grouped) {
    std::sort(entries.begin(), entries.end());
    PerOutput o;
    Dyadic mass;
    std::uint64_t best = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto [stage, len] = entries[i];
      ++omega_counts[{stage, len}];
      mass += weight(len);
      if (i == 0) {
        theta_delta[stage] += weight(len);
        best = len;
      } else if (len < best) {
        theta_delta[stage] += weight(len) - weight(best);
        best = len;
      }
      o.stages.push_back(stage);
      o.mass.push_back(mass);
      o.min_len.push_back(best);
    }
    first_seen_.emplace_back(entries.front().first, s);
    per_output_.emplace(s, std::move(o));
  }
  for (const auto& [key, count] : omega_counts) {
    omega_delta[key.first] += Dyadic(mpz_class(static_cast<unsigned long>(count)), -static_cast<std::int64_t>(key.second));
  }
  std::sort(first_seen_.begin(), first_seen_.end());
  omega_.resize(T + 1);
  theta_.resize(T + 1);
  for (std::size_t n = 0; n <= T; ++n) {
    omega_[n] = (n == 0 ? Dyadic() : omega_[n - 1]) + omega_delta[n];
    theta_[n] = (n == 0 ? Dyadic() : theta_[n - 1]) + theta_delta[n];
  }
}

std::ptrdiff_t EnumerationHistory::found_by(const PerOutput& o, std::uint64_t n) const {
  const auto it = std::upper_bound(o.stages.begin(), o.stages.end(), std::min(n, horizon_));
  return (it - o.stages.begin()) - 1;
}

Dyadic EnumerationHistory::p_hat(std::uint64_t n, const BitString& s) const {
  const auto it = per_output_.find(s);
  if (it == per_output_.end()) return Dyadic();
  const auto i = found_by(it->second, n);
  return i < 0 ? Dyadic() : it->second.mass[static_cast<std::size_t>(i)];
}

std::optional<std::uint64_t> EnumerationHistory::k_hat(std::uint64_t n, const BitString& s) const {
  const auto it = per_output_.find(s);
  if (it == per_output_.end()) return std::nullopt;
  const auto i = found_by(it->second, n);
  if (i < 0) return std::nullopt;
  return it->second.min_len[static_cast<std::size_t>(i)];
}

std::vector<BitString> EnumerationHistory::support(std::uint64_t n) const {
  std::vector<BitString> out;
  const std::uint64_t m = std::min(n, horizon_);
  for (const auto& [stage, s] : first_seen_) {
    if (stage > m) break;
    out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Dyadic> EnumerationHistory::p_tail(std::uint64_t n, const BitString& s) const {
  return machine_->missing_mass_bound(s, std::min(n, horizon_));
}

}  // namespace ait
