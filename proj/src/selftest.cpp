#include <fmt/format.h>

#include <algorithm>
#include <ostream>

#include "biorv/assembler.hpp"
#include "biorv/cli.hpp"
#include "biorv/error.hpp"
#include "biorv/harness.hpp"
#include "biorv/reference.hpp"
#include "bundled_programs.hpp"
#include "golden_types.hpp"

namespace biorv::cli {

namespace {

int check_golden(std::ostream& out) {
  int failures = 0;
  for (const auto& g : golden::kGoldenEncodings) {
    bool ok = false;
    if (auto d = try_decode(g.word)) {
      ok = mnemonic(d->op) == g.mnemonic && d->rd == g.rd && d->rs1 == g.rs1 && d->rs2 == g.rs2 && d->imm == g.imm &&
           encode(*d) == g.word;
    }
    if (!ok) {
      ++failures;
      out << fmt::format("FAIL golden {} (0x{:08X})\n", g.text, g.word);
    }
  }
  for (const auto& g : golden::kGoldenUnsupported) {
    if (try_decode(g.word)) {
      ++failures;
      out << fmt::format("FAIL unsupported {} (0x{:08X}) decoded\n", g.text, g.word);
    }
  }
  out << fmt::format("golden encodings: {} supported, {} unsupported, {} failure(s)\n",
                     std::size(golden::kGoldenEncodings), std::size(golden::kGoldenUnsupported), failures);
  return failures;
}

int check_oracle(std::ostream& out, std::string_view name, std::string_view source) {
  const MemoryImage image = assemble(source);
  Simulator sim;
  program_and_start(sim, image);
  const RunReport report = run(sim.core, sim.bus(), 1'000'000);
  const ReferenceResult ref = reference_execute(image, 0, 1'000'000);

  const bool same_mem = std::equal(ref.memory.begin(), ref.memory.end(), sim.memory.words().begin(),
                                   sim.memory.words().end());
  const bool ok = report.halt_reason == HaltReason::SelfLoop && ref.halted &&
                  report.final_state.regfile == ref.regfile && report.final_state.pc == ref.pc && same_mem &&
                  report.retired_total() == ref.instr_count;
  out << fmt::format("oracle equivalence {}: {} ({} instructions, {} cycles)\n", name, ok ? "ok" : "FAIL",
                     report.retired_total(), report.total_cycles);
  return ok ? 0 : 1;
}

int check_pacemaker(std::ostream& out) {
  Simulator sim;
  program_and_start(sim, assemble(bundled::kPacemaker));
  const RunReport report = run(sim.core, sim.bus(), 1'000'000);
  const std::size_t logged = sim.mmio.device(DeviceKind::Pacing).event_log.size() +
                             sim.mmio.device(DeviceKind::Telemetry).event_log.size();
  const bool ok = report.halt_reason == HaltReason::SelfLoop && logged == report.retired_of(InstrClass::Store) &&
                  sim.mmio.get_register(DeviceKind::Telemetry, DeviceReg::Data) == 10;
  out << fmt::format("pacemaker loop: {} ({} MMIO stores)\n", ok ? "ok" : "FAIL", logged);
  return ok ? 0 : 1;
}

}  // namespace

int run_selftest(std::ostream& out) {
  int failures = 0;
  try {
    failures += check_golden(out);
    failures += check_oracle(out, "demo", bundled::kDemo);
    failures += check_oracle(out, "timing", bundled::kTiming);
    failures += check_pacemaker(out);
  } catch (const Error& e) {
    out << "FAIL " << e.what() << '\n';
    ++failures;
  }
  out << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
  return failures;
}

}  // namespace biorv::cli
