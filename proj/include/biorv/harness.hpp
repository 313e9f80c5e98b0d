#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "biorv/core.hpp"
#include "biorv/image.hpp"
#include "biorv/memory.hpp"
#include "biorv/metrics.hpp"
#include "biorv/peripherals.hpp"

namespace biorv {

// Core, unified memory and the stub peripherals of the host SoC.
struct Simulator {
  explicit Simulator(std::size_t memory_size_bytes = UnifiedMemory::kDefaultSizeBytes)
      : memory(memory_size_bytes), mmio(PeripheralMap::default_map(memory_size_bytes)) {}
  Simulator(UnifiedMemory mem, PeripheralMap map) : memory(std::move(mem)), mmio(std::move(map)) {}

  Bus bus() { return Bus{memory, &mmio}; }

  CoreState core;
  UnifiedMemory memory;
  PeripheralMap mmio;
};

// IE=0/we=1, write the image word by word, hold reset for one cycle, then
// release reset with IE=1. On failure the simulator is left in Observation.
void program_and_start(Simulator& sim, const MemoryImage& image);

struct Observation {
  MemoryImage words;
  // The core was executing and observation deasserted IE; it stays stopped.
  bool stopped_execution = false;
};

// Reads [addr, addr + len_bytes) in Observation mode. A previously
// non-executing mode is restored afterwards; an executing core is not resumed.
Observation observe(Simulator& sim, Addr addr, std::size_t len_bytes);

inline Word mmio_dispatch(PeripheralMap& map, Addr addr, MmioAccess access, std::uint64_t cycle) {
  return map.dispatch(addr, access, cycle);
}

// Clocks the simulator for up to `cycles`. When executing this is run();
// otherwise every cycle is held and the report says so.
RunReport run_cycles(Simulator& sim, std::uint64_t cycles, const EnergyModel& model = {}, HaltPolicy halt = {},
                     const TraceSink& trace = {});

namespace step {
struct LoadImage {
  MemoryImage image;
  std::string source;
};
struct PulseReset {};
struct StartExecution {};
struct StopExecution {};
struct Observe {
  Addr addr;
  std::size_t len_bytes;
};
struct RunCycles {
  std::uint64_t cycles;
};
}  // namespace step

using ScriptAction =
    std::variant<step::LoadImage, step::PulseReset, step::StartExecution, step::StopExecution, step::Observe,
                 step::RunCycles>;

struct ScriptStep {
  ScriptAction action;
  int line = 0;
};

struct BringUpScript {
  std::vector<ScriptStep> steps;

  // Every `start` must come after at least one `reset`. Throws Script.
  void validate() const;
};

// Commands, one per line: `load <hexfile>`, `reset`, `start`, `stop`,
// `observe <addr> <len>`, `run <cycles>`. `#` starts a comment. Relative hex
// paths resolve against `base_dir`.
BringUpScript parse_script(std::string_view text, const std::filesystem::path& base_dir = {});

struct ScriptResult {
  std::vector<RunReport> reports;
  std::vector<Observation> observations;
  bool faulted = false;
};

// Validates, then executes each step, writing a transcript to `out`: observe
// results in hex image format and run reports as key=value lines. Stops after
// the first faulting run.
ScriptResult run_script(Simulator& sim, const BringUpScript& script, std::ostream& out, const EnergyModel& model = {},
                        const TraceSink& trace = {});

}  // namespace biorv
