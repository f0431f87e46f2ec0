#pragma once

// Self-delimiting computers. Program bits are handed over one at a time and
// only on request, and a machine never learns that its input has ended, so
// the set of programs on which it halts is prefix-free.
//
// Reference machine SDVM, opcodes read most-significant bit first:
//   00 EMIT0  append 0
//   01 EMIT1  append 1
//   10 DUP    append a copy of the whole current output
//   11 HALT
// Cost: 1 step per opcode plus 1 step per appended output bit.
// Reading a bit is free.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ait/bitstring.hpp"
#include "ait/dyadic.hpp"

namespace ait {

using Steps = std::uint64_t;

enum class Event { halted, needs_input, out_of_budget };

/// Private execution state of one run.
class Execution {
 public:
  virtual ~Execution() = default;

  /// Runs until the machine halts, asks for a bit, or the next action would
  /// take the step count past `budget`. Calling again with a larger budget
  /// continues where it stopped.
  virtual Event resume(Steps budget) = 0;
  /// Supplies the requested bit. Only valid right after needs_input.
  virtual void feed(bool bit) = 0;

  [[nodiscard]] virtual Steps steps() const = 0;
  [[nodiscard]] virtual std::size_t consumed() const = 0;
  [[nodiscard]] virtual const BitString& output() const = 0;
  [[nodiscard]] virtual std::unique_ptr<Execution> clone() const = 0;
};

class Computer {
 public:
  virtual ~Computer() = default;

  [[nodiscard]] virtual std::string name() const = 0;
  [[nodiscard]] virtual std::unique_ptr<Execution> start() const = 0;

  /// Certified upper bound on sum 2^{-|p|} over halting programs p with
  /// output s that the dovetailing schedule has not found by `stage`.
  /// Only machines with a closed form provide one.
  [[nodiscard]] virtual std::optional<Dyadic> missing_mass_bound(const BitString& s,
                                                                 std::uint64_t stage) const {
    (void)s;
    (void)stage;
    return std::nullopt;
  }

  /// Every halting program has at least this many bits.
  [[nodiscard]] virtual std::size_t min_program_length() const { return 0; }
};

struct Halted {
  BitString output;
  Steps steps = 0;
  friend bool operator==(const Halted&, const Halted&) = default;
};
struct NeedsMoreInput {
  std::size_t consumed = 0;
  friend bool operator==(const NeedsMoreInput&, const NeedsMoreInput&) = default;
};
struct OutOfBudget {
  std::size_t consumed = 0;
  friend bool operator==(const OutOfBudget&, const OutOfBudget&) = default;
};
using Outcome = std::variant<Halted, NeedsMoreInput, OutOfBudget>;

/// Runs `program` with a step budget. Throws ValidationError for budget 0
/// and DomainViolation if the machine halts before reading all of `program`
/// (some proper prefix is already a complete program).
Outcome run(const Computer& machine, const BitString& program, Steps budget);

class Sdvm final : public Computer {
 public:
  [[nodiscard]] std::string name() const override { return "sdvm"; }
  [[nodiscard]] std::unique_ptr<Execution> start() const override;
  [[nodiscard]] std::optional<Dyadic> missing_mass_bound(const BitString& s,
                                                         std::uint64_t stage) const override;
  [[nodiscard]] std::size_t min_program_length() const override { return 2; }
};

/// SDVM with DUP replaced by an infinite loop. Halts exactly on
/// ({00,01})*11 and runs forever on anything that reaches a 10 opcode.
class Spinner final : public Computer {
 public:
  [[nodiscard]] std::string name() const override { return "spinner"; }
  [[nodiscard]] std::unique_ptr<Execution> start() const override;
  [[nodiscard]] std::size_t min_program_length() const override { return 2; }
};

/// "sdvm" or "spinner". Throws ValidationError for other names.
std::shared_ptr<const Computer> machine_by_name(std::string_view name);

enum class Opcode { emit0, emit1, dup, halt };
std::string_view opcode_name(Opcode op);

struct TraceStep {
  Opcode op;
  BitString output;
  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct Trace {
  std::vector<TraceStep> steps;
  /// True when the program ended in HALT; false when the input ran out
  /// (a trailing odd bit is ignored).
  bool halted = false;
  /// Bits left unread after HALT.
  std::size_t unread = 0;
};

/// Decodes SDVM opcodes and the output after each of them.
Trace trace(const BitString& program);

}  // namespace ait
