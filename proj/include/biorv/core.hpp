#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "biorv/core_state.hpp"
#include "biorv/memory.hpp"
#include "biorv/metrics.hpp"
#include "biorv/peripherals.hpp"

namespace biorv {

// Data-side view of the address space: the unified memory plus optional MMIO
// devices above it. Instruction fetch only ever sees memory.
struct Bus {
  UnifiedMemory& memory;
  PeripheralMap* mmio = nullptr;
};

struct TraceRecord {
  std::uint64_t cycle = 0;
  ControlMode mode = ControlMode::Observation;
  // Empty for held (non-executing) cycles.
  std::optional<FsmState> state;
  Addr pc = 0;
  Word ir = 0;
  bool retired = false;
};

// `cycle,mode,fsm_state,pc_hex,ir_hex,"disasm",retired`
std::string format_trace(const TraceRecord& rec);
inline constexpr std::string_view kTraceHeader = "cycle,mode,fsm_state,pc,ir,disasm,retired";

// Drives the control lines. Reset dominates: pc, FSM and temporaries are
// cleared (registers and memory are kept). Mode changes take effect from the
// next step_cycle; an instruction interrupted by IE=0 resumes where it stopped.
void apply_control(CoreState& core, bool ie, bool reset, bool write_enable);

// One clock edge. Outside Executing nothing architectural changes and the
// cycle is counted as held. Errors carry the pc and FSM state.
TraceRecord step_cycle(CoreState& core, Bus bus);
inline TraceRecord step_cycle(CoreState& core, UnifiedMemory& mem) { return step_cycle(core, Bus{mem}); }

struct StepResult {
  DecodedInstruction instr;
  int cycles;
};

// Steps until the in-flight instruction retires. Throws NotExecuting.
StepResult step_instruction(CoreState& core, Bus bus);
inline StepResult step_instruction(CoreState& core, UnifiedMemory& mem) { return step_instruction(core, Bus{mem}); }

struct HaltPolicy {
  // Stop once a jal/beq retires with its own address as the next pc.
  bool self_loop = true;
};

using TraceSink = std::function<void(const TraceRecord&)>;

// Runs until halt, cycle budget or fault; faults and budget exhaustion are
// reported in the RunReport rather than thrown. Throws InvalidArgument for
// max_cycles == 0 and NotExecuting if the core is not executing.
RunReport run(CoreState& core, Bus bus, std::uint64_t max_cycles, HaltPolicy halt = {},
              const EnergyModel& model = {}, const TraceSink& trace = {});
inline RunReport run(CoreState& core, UnifiedMemory& mem, std::uint64_t max_cycles, HaltPolicy halt = {}) {
  return run(core, Bus{mem}, max_cycles, halt);
}

}  // namespace biorv
