#include "ait/machine.hpp"

#include "ait/errors.hpp"
#include "ait/sdvm.hpp"

namespace ait {
namespace {

Opcode decode(bool hi, bool lo) {
  if (!hi) return lo ? Opcode::emit1 : Opcode::emit0;
  return lo ? Opcode::halt : Opcode::dup;
}

// Shared by SDVM and the spinner, which differ only in what DUP does.
template <bool Spins>
class OpcodeExecution final : public Execution {
 public:
  Event resume(Steps budget) override {
    for (;;) {
      if (halted_) return Event::halted;
      if (pending_bits_ < 2) return Event::needs_input;
      const Opcode op = decode(opcode_[0], opcode_[1]);
      if constexpr (Spins) {
        if (op == Opcode::dup) return Event::out_of_budget;
      }
      const Steps cost = 1 + appended_by(op);
      if (steps_ + cost > budget) return Event::out_of_budget;
      steps_ += cost;
      pending_bits_ = 0;
      switch (op) {
        case Opcode::emit0: output_.push_back(false); break;
        case Opcode::emit1: output_.push_back(true); break;
        case Opcode::dup: output_.append(output_); break;
        case Opcode::halt: halted_ = true; break;
      }
    }
  }

  void feed(bool bit) override {
    if (halted_ || pending_bits_ >= 2) throw PreconditionViolation("bit fed to a machine that did not ask for one");
    opcode_[pending_bits_++] = bit;
    ++consumed_;
  }

  [[nodiscard]] Steps steps() const override { return steps_; }
  [[nodiscard]] std::size_t consumed() const override { return consumed_; }
  [[nodiscard]] const BitString& output() const override { return output_; }
  [[nodiscard]] std::unique_ptr<Execution> clone() const override {
    return std::make_unique<OpcodeExecution>(*this);
  }

 private:
  [[nodiscard]] Steps appended_by(Opcode op) const {
    switch (op) {
      case Opcode::emit0:
      case Opcode::emit1: return 1;
      case Opcode::dup: return output_.size();
      case Opcode::halt: return 0;
    }
    return 0;
  }

  BitString output_;
  Steps steps_ = 0;
  std::size_t consumed_ = 0;
  bool opcode_[2] = {false, false};
  int pending_bits_ = 0;
  bool halted_ = false;
};

}  // namespace

Outcome run(const Computer& machine, const BitString& program, Steps budget) {
  if (budget < 1) throw ValidationError("run: budget must be at least 1");
  auto exec = machine.start();
  for (;;) {
    switch (exec->resume(budget)) {
      case Event::halted:
        if (exec->consumed() < program.size()) {
          throw DomainViolation(machine.name() + " halted after " + std::to_string(exec->consumed()) +
                                " of " + std::to_string(program.size()) + " bits of \"" +
                                program.to_string() + "\"");
        }
        return Halted{exec->output(), exec->steps()};
      case Event::needs_input:
        if (exec->consumed() == program.size()) return NeedsMoreInput{exec->consumed()};
        exec->feed(program[exec->consumed()]);
        break;
      case Event::out_of_budget:
        return OutOfBudget{exec->consumed()};
    }
  }
}

std::unique_ptr<Execution> Sdvm::start() const { return std::make_unique<OpcodeExecution<false>>(); }

std::optional<Dyadic> Sdvm::missing_mass_bound(const BitString& s, std::uint64_t stage) const {
  // Exact rational, rounded up onto a dyadic grid fine enough to keep it tight.
  const Rational m = sdvm::missing_mass(s, stage);
  if (m == 0) return Dyadic();
  return round_rational(m, 2 * static_cast<std::int64_t>(stage + s.size()) + 64, Rounding::up);
}

std::unique_ptr<Execution> Spinner::start() const { return std::make_unique<OpcodeExecution<true>>(); }

std::shared_ptr<const Computer> machine_by_name(std::string_view name) {
  if (name == "sdvm") return std::make_shared<Sdvm>();
  if (name == "spinner") return std::make_shared<Spinner>();
  throw ValidationError("unknown machine \"" + std::string(name) + "\" (expected sdvm or spinner)");
}

std::string_view opcode_name(Opcode op) {
  switch (op) {
    case Opcode::emit0: return "EMIT0";
    case Opcode::emit1: return "EMIT1";
    case Opcode::dup: return "DUP";
    case Opcode::halt: return "HALT";
  }
  return "?";
}

Trace trace(const BitString& program) {
  Trace t;
  BitString out;
  std::size_t i = 0;
  for (; i + 1 < program.size(); i += 2) {
    const Opcode op = decode(program[i], program[i + 1]);
    if (op == Opcode::emit0) out.push_back(false);
    if (op == Opcode::emit1) out.push_back(true);
    if (op == Opcode::dup) out.append(out);
    t.steps.push_back({op, out});
    if (op == Opcode::halt) {
      t.halted = true;
      i += 2;
      break;
    }
  }
  if (t.halted) t.unread = program.size() - i;
  return t;
}

}  // namespace ait
