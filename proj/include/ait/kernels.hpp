#pragma once

// Hot loops with two interchangeable implementations: a plain serial
// reference and an OpenMP version. Both produce identical results; tests
// compare them and the benchmark target times them.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <vector>

#include "ait/interval.hpp"
#include "ait/machine.hpp"

namespace ait {

enum class Exec { serial, parallel };

/// Caps the number of OpenMP threads (0 restores the runtime default).
void set_worker_count(int n);
int worker_count();

struct HaltRecord {
  BitString program;
  BitString output;
  Steps steps = 0;

  /// First dovetailing stage that finds this record.
  [[nodiscard]] std::uint64_t discovery_stage() const {
    return std::max<std::uint64_t>(program.size(), steps);
  }
  friend bool operator==(const HaltRecord&, const HaltRecord&) = default;
};

/// Records sort by program in length-then-lexicographic order.
inline bool by_program(const HaltRecord& a, const HaltRecord& b) { return a.program < b.program; }

enum class Pending { needs_input, out_of_budget };

/// A program prefix the schedule has reached but not resolved.
struct PendingPrefix {
  BitString prefix;
  Pending reason = Pending::needs_input;
  friend bool operator==(const PendingPrefix&, const PendingPrefix&) = default;
};

struct Exploration {
  std::vector<HaltRecord> records;    // sorted by program
  std::vector<PendingPrefix> pending;  // sorted by prefix
  std::size_t nodes = 0;
};

/// Explores the bit-request tree below each root prefix: every reachable
/// program of length <= max_len is run with the step budget. Each root
/// must be a prefix the machine reads completely without halting.
Exploration explore(const Computer& machine, const std::vector<BitString>& roots, std::size_t max_len,
                    Steps budget, Exec exec);

/// out[i] = f(i) for i < n. Exceptions thrown by f propagate (the one for
/// the smallest index wins, so serial and parallel agree).
std::vector<Interval> evaluate_terms(std::size_t n, const std::function<Interval(std::size_t)>& f,
                                     Exec exec);

}  // namespace ait
