#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "biorv/control_mode.hpp"
#include "biorv/isa.hpp"

namespace biorv {

enum class FsmState {
  Fetch,
  Decode,
  Execute,
  AluWriteback,
  MemAddr,
  MemRead,
  LoadWriteback,
  MemWrite,
  BranchCompletion,
  JumpLink,
};

std::string_view to_string(FsmState s);

inline constexpr std::size_t kClassCount = 6;

using ClassCounts = std::array<std::uint64_t, kClassCount>;

inline std::size_t class_index(InstrClass c) { return static_cast<std::size_t>(c); }

// x0 reads as zero and ignores writes.
class RegisterFile {
 public:
  Word read(unsigned index) const { return regs_[index]; }
  void write(unsigned index, Word value) {
    if (index != 0) regs_[index] = value;
  }
  const std::array<Word, kRegCount>& values() const { return regs_; }

  friend bool operator==(const RegisterFile&, const RegisterFile&) = default;

 private:
  std::array<Word, kRegCount> regs_{};
};

struct CoreState {
  Addr pc = 0;
  // Address of the instruction currently in flight, latched in Fetch.
  Addr instr_pc = 0;
  RegisterFile regfile;
  FsmState fsm = FsmState::Fetch;

  // Multi-cycle temporaries.
  Word ir = 0;
  std::optional<DecodedInstruction> decoded;
  Word a = 0;
  Word b = 0;
  Word alu_out = 0;
  Word mdr = 0;

  ControlMode mode = ControlMode::Observation;

  // Executing cycles and retirements since the last reset.
  std::uint64_t cycle_count = 0;
  std::uint64_t retired_count = 0;
  ClassCounts retired_by_class{};
  // Non-executing cycles since the last reset.
  std::uint64_t held_cycles = 0;
  // Clock edges since construction; never cleared. Used for trace and MMIO stamps.
  std::uint64_t tick = 0;

  friend bool operator==(const CoreState&, const CoreState&) = default;
};

}  // namespace biorv
