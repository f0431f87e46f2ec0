#pragma once

// Dovetailed enumeration of a computer's halting programs.
//
// Stage t has run every program prefix of length <= t under step budget t.
// A program p is therefore found at stage max(|p|, steps(p)), and from the
// records found so far we read upper bounds on K and lower bounds on P.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "ait/bitstring.hpp"
#include "ait/dyadic.hpp"
#include "ait/kernels.hpp"
#include "ait/machine.hpp"

namespace ait {

/// Per-output summary of the records found so far.
struct OutputStats {
  std::uint64_t min_len = 0;
  Dyadic mass;
  std::size_t programs = 0;
};

/// Immutable snapshot. Copies share storage.
class EnumerationState {
 public:
  /// Stage 0: nothing explored yet.
  static EnumerationState initial(std::shared_ptr<const Computer> machine);

  /// A state at `stage` holding exactly these records; the pending frontier
  /// is unknown and will be recomputed by the next advance.
  static EnumerationState from_records(std::shared_ptr<const Computer> machine, std::uint64_t stage,
                                       std::vector<HaltRecord> records);

  [[nodiscard]] const Computer& machine() const { return *data_->machine; }
  [[nodiscard]] const std::shared_ptr<const Computer>& machine_ptr() const { return data_->machine; }
  [[nodiscard]] std::uint64_t stage() const { return data_->stage; }
  /// Sorted by program (length-then-lex), duplicate-free.
  [[nodiscard]] const std::vector<HaltRecord>& records() const { return data_->records; }
  [[nodiscard]] const std::optional<std::vector<PendingPrefix>>& pending() const { return data_->pending; }
  [[nodiscard]] const std::map<BitString, OutputStats>& outputs() const { return data_->outputs; }
  /// Tree nodes visited by the last advance (0 when unknown).
  [[nodiscard]] std::size_t nodes_visited() const { return data_->nodes; }

  /// min |p| over records with output s; nullopt means infinity.
  [[nodiscard]] std::optional<std::uint64_t> k_hat(const BitString& s) const;
  /// Exact sum of 2^{-|p|} over records with output s.
  [[nodiscard]] Dyadic p_hat(const BitString& s) const;
  /// Sum of 2^{-|p|} over all records.
  [[nodiscard]] const Dyadic& omega_hat() const { return data_->omega; }
  /// Sum of 2^{-k_hat(s)} over outputs found.
  [[nodiscard]] const Dyadic& theta_hat() const { return data_->theta; }
  /// Certified bound on P(s) - p_hat(s) when the machine has a closed form.
  [[nodiscard]] std::optional<Dyadic> p_tail(const BitString& s) const;

  /// Same machine name, stage and records.
  friend bool operator==(const EnumerationState& a, const EnumerationState& b);

 private:
  struct Data {
    std::shared_ptr<const Computer> machine;
    std::uint64_t stage = 0;
    std::vector<HaltRecord> records;
    std::optional<std::vector<PendingPrefix>> pending;
    std::map<BitString, OutputStats> outputs;
    Dyadic omega;
    Dyadic theta;
    std::size_t nodes = 0;
  };
  explicit EnumerationState(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
  static EnumerationState build(std::shared_ptr<const Computer> machine, std::uint64_t stage,
                                std::vector<HaltRecord> records,
                                std::optional<std::vector<PendingPrefix>> pending, std::size_t nodes);
  friend EnumerationState advance_stage(const EnumerationState& st, Exec exec);

  std::shared_ptr<const Data> data_;
};

/// Stage t -> t + 1. The result does not depend on `exec`.
EnumerationState advance_stage(const EnumerationState& st, Exec exec = Exec::parallel);
/// Advances until `stage` (no-op when already there). Throws
/// ValidationError when asked to go backwards.
EnumerationState advance_to(const EnumerationState& st, std::uint64_t stage, Exec exec = Exec::parallel);
inline EnumerationState enumerate_to(std::shared_ptr<const Computer> m, std::uint64_t stage,
                                     Exec exec = Exec::parallel) {
  return advance_to(EnumerationState::initial(std::move(m)), stage, exec);
}

/// Every halting program of length <= max_len, run with one fixed budget.
/// Throws BudgetInsufficient if some path is still running at the budget.
std::vector<HaltRecord> exact_domain_upto(const Computer& machine, std::size_t max_len, Steps budget,
                                          Exec exec = Exec::parallel);

/// Cache CSV: line 1 "machine,stage", then "program,output,steps" rows
/// sorted by program; an empty field is the empty string.
void persist_records(const EnumerationState& st, const std::filesystem::path& path);
/// Throws IoError, FormatError (malformed row, or a row the machine does not
/// reproduce), or MismatchError if the file belongs to another machine.
EnumerationState load_records(const std::filesystem::path& path, std::shared_ptr<const Computer> machine);

/// Answers stage-n queries for every n up to the stage of the snapshot it
/// was built from. Queries above that stage see the final snapshot.
class EnumerationHistory {
 public:
  explicit EnumerationHistory(const EnumerationState& horizon);

  [[nodiscard]] std::uint64_t horizon() const { return horizon_; }
  [[nodiscard]] const Computer& machine() const { return *machine_; }

  [[nodiscard]] Dyadic p_hat(std::uint64_t n, const BitString& s) const;
  [[nodiscard]] std::optional<std::uint64_t> k_hat(std::uint64_t n, const BitString& s) const;
  [[nodiscard]] const Dyadic& omega_hat(std::uint64_t n) const { return omega_[clamp(n)]; }
  [[nodiscard]] const Dyadic& theta_hat(std::uint64_t n) const { return theta_[clamp(n)]; }
  /// Outputs with at least one record found by stage n, in string order.
  [[nodiscard]] std::vector<BitString> support(std::uint64_t n) const;
  [[nodiscard]] std::optional<Dyadic> p_tail(std::uint64_t n, const BitString& s) const;

 private:
  struct PerOutput {
    std::vector<std::uint64_t> stages;  // nondecreasing discovery stages
    std::vector<Dyadic> mass;           // prefix sums of 2^{-len}
    std::vector<std::uint64_t> min_len;  // prefix minima of len
  };
  [[nodiscard]] std::size_t clamp(std::uint64_t n) const {
    return static_cast<std::size_t>(std::min<std::uint64_t>(n, horizon_));
  }
  [[nodiscard]] std::ptrdiff_t found_by(const PerOutput& o, std::uint64_t n) const;

  std::shared_ptr<const Computer> machine_;
  std::uint64_t horizon_ = 0;
  std::map<BitString, PerOutput> per_output_;
  std::vector<std::pair<std::uint64_t, BitString>> first_seen_;  // sorted by stage, then string
  std::vector<Dyadic> omega_;
  std::vector<Dyadic> theta_;
};

}  // namespace ait
