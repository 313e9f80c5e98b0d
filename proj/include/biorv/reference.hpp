#pragma once

#include <cstdint>
#include <vector>

#include "biorv/core_state.hpp"
#include "biorv/image.hpp"

namespace biorv {

struct ReferenceResult {
  RegisterFile regfile;
  std::vector<Word> memory;
  Addr pc = 0;
  std::uint64_t instr_count = 0;
  bool halted = false;  // stopped on a self-loop rather than the instruction limit
};

// Functional ISS: one whole instruction per step, no FSM and no cycle model.
// Loads `image` into a fresh zeroed memory of `memory_size_bytes` and runs from
// `entry` until a self-targeting jal/beq retires or `max_instrs` have retired.
// Accesses outside memory raise OutOfRange (there is no MMIO here).
ReferenceResult reference_execute(const MemoryImage& image, Addr entry, std::uint64_t max_instrs,
                                  std::size_t memory_size_bytes = 4096);

}  // namespace biorv
