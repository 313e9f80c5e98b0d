#include "biorv/cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <filesystem>
#include <ostream>

#include "biorv/assembler.hpp"
#include "biorv/error.hpp"
#include "biorv/harness.hpp"

namespace biorv::cli {

namespace {

struct CliConfig {
  std::size_t mem_size_bytes = UnifiedMemory::kDefaultSizeBytes;
  double pj_per_cycle = EnergyModel::kDefaultPjPerCycle;
  double freq_hz = EnergyModel::kDefaultFreqHz;
  std::uint64_t max_cycles = 1'000'000;
  bool trace_enabled = false;
  bool always_on_clock = false;
  std::string peripheral_map_file;

  EnergyModel energy() const { return {pj_per_cycle, freq_hz, always_on_clock}; }
};

void add_sim_options(CLI::App& cmd, CliConfig& cfg) {
  cmd.add_option("--mem-size", cfg.mem_size_bytes, "Unified memory size in bytes")->check(CLI::PositiveNumber);
  cmd.add_option("--pj-per-cycle", cfg.pj_per_cycle, "Energy per executing cycle (pJ)")->check(CLI::PositiveNumber);
  cmd.add_option("--freq-hz", cfg.freq_hz, "Clock frequency for power (Hz)")->check(CLI::PositiveNumber);
  cmd.add_option("--peripheral-map", cfg.peripheral_map_file, "Peripheral map file (<device> <base> [span])");
  cmd.add_flag("--always-on-clock", cfg.always_on_clock, "Bill held cycles in the energy estimate");
  cmd.add_flag("--trace", cfg.trace_enabled, "Print one CSV line per cycle");
}

Simulator make_simulator(const CliConfig& cfg) {
  if (cfg.mem_size_bytes % 4 != 0) throw Error(ErrorKind::InvalidArgument, "--mem-size must be a multiple of 4");
  UnifiedMemory mem(cfg.mem_size_bytes);
  PeripheralMap map = cfg.peripheral_map_file.empty()
                          ? PeripheralMap::default_map(cfg.mem_size_bytes)
                          : PeripheralMap::parse(read_text_file(cfg.peripheral_map_file), cfg.mem_size_bytes);
  return Simulator(std::move(mem), std::move(map));
}

int status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownMnemonic:
    case ErrorKind::UndefinedLabel:
    case ErrorKind::DuplicateLabel:
    case ErrorKind::OperandCount:
    case ErrorKind::BranchTargetMisaligned:
    case ErrorKind::ImmediateOutOfRange:
    case ErrorKind::MisalignedImmediate:
    case ErrorKind::Syntax: return kAssemblyError;
    case ErrorKind::Io:
    case ErrorKind::InvalidArgument:
    case ErrorKind::Script: return kUsage;
    default: return kRuntimeFault;
  }
}

// error[Kind] <context>: message
void report_error(std::ostream& err, const std::string& context, const Error& e) {
  std::string where = context;
  if (e.line()) where += fmt::format(":{}", *e.line());
  err << fmt::format("error[{}] {}: {}\n", to_string(e.kind()), where, e.message());
}

TraceSink trace_to(std::ostream& out, bool enabled) {
  if (!enabled) return {};
  out << kTraceHeader << '\n';
  return [&out](const TraceRecord& r) { out << format_trace(r) << '\n'; };
}

int cmd_asm(const std::string& in, const std::string& out_path, Addr base, std::ostream& err) {
  try {
    write_hex_file(out_path, assemble(read_text_file(in), base));
  } catch (const Error& e) {
    report_error(err, in, e);
    return status_for(e.kind());
  }
  return kOk;
}

int cmd_dis(const std::string& in, std::ostream& out, std::ostream& err) {
  try {
    out << disassemble(read_hex_file(in));
  } catch (const Error& e) {
    report_error(err, in, e);
    return status_for(e.kind());
  }
  return kOk;
}

int cmd_run(const std::string& in, const CliConfig& cfg, const std::string& dump_path, const std::string& report_path,
            std::ostream& out, std::ostream& err) {
  RunReport report;
  try {
    Simulator sim = make_simulator(cfg);
    program_and_start(sim, read_hex_file(in));
    report = run(sim.core, sim.bus(), cfg.max_cycles, HaltPolicy{}, cfg.energy(), trace_to(out, cfg.trace_enabled));
    if (!dump_path.empty()) write_hex_file(dump_path, sim.memory.dump());
    if (!report_path.empty()) write_text_file(report_path, render_kv(report));
  } catch (const Error& e) {
    report_error(err, in, e);
    return status_for(e.kind());
  }
  out << render_text(report);
  switch (report.halt_reason) {
    case HaltReason::Fault:
      err << fmt::format("error[{}] {}: {}\n", to_string(report.fault->kind), in, report.fault->message);
      return kRuntimeFault;
    case HaltReason::BudgetExhausted:
      err << fmt::format("error[CycleBudgetExhausted] {}: no halt within {} cycles\n", in, cfg.max_cycles);
      return kBudgetExhausted;
    default: return kOk;
  }
}

int cmd_script(const std::string& path, const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    Simulator sim = make_simulator(cfg);
    const BringUpScript script =
        parse_script(read_text_file(path), std::filesystem::path(path).parent_path());
    const ScriptResult result = run_script(sim, script, out, cfg.energy(), trace_to(out, cfg.trace_enabled));
    if (result.faulted) {
      const Fault& f = *result.reports.back().fault;
      err << fmt::format("error[{}] {}: {}\n", to_string(f.kind), path, f.message);
      return kRuntimeFault;
    }
  } catch (const Error& e) {
    report_error(err, path, e);
    return status_for(e.kind()) == kUsage ? kUsage : kRuntimeFault;
  }
  return kOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-cycle RV32I controller core simulator and toolchain", "biorv"};
  app.require_subcommand(1);

  std::string asm_in, asm_out;
  std::string base_text = "0";
  auto* asm_cmd = app.add_subcommand("asm", "Assemble a source file into a hex image");
  asm_cmd->add_option("input", asm_in, "Assembly source")->required();
  asm_cmd->add_option("-o,--output", asm_out, "Output hex image")->required();
  asm_cmd->add_option("--base", base_text, "Load address of the first instruction");

  std::string dis_in;
  auto* dis_cmd = app.add_subcommand("dis", "Disassemble a hex image");
  dis_cmd->add_option("input", dis_in, "Hex image")->required();

  CliConfig run_cfg;
  std::string run_in, dump_path, report_path;
  auto* run_cmd = app.add_subcommand("run", "Program, reset, start and run a hex image");
  run_cmd->add_option("input", run_in, "Hex image")->required();
  run_cmd->add_option("--max-cycles", run_cfg.max_cycles, "Cycle budget")->check(CLI::PositiveNumber);
  run_cmd->add_option("--dump-mem", dump_path, "Write final memory as a hex image");
  run_cmd->add_option("--report", report_path, "Write the run report as key=value lines");
  add_sim_options(*run_cmd, run_cfg);

  CliConfig script_cfg;
  std::string script_in;
  auto* script_cmd = app.add_subcommand("script", "Execute a bring-up script");
  script_cmd->add_option("input", script_in, "Bring-up script")->required();
  add_sim_options(*script_cmd, script_cfg);

  auto* selftest_cmd = app.add_subcommand("selftest", "Golden encodings and oracle equivalence");

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << fmt::format("error[Usage] {}\n", e.what());
    return kUsage;
  }

  if (*asm_cmd) {
    std::uint64_t base = 0;
    try {
      base = std::stoull(base_text, nullptr, 0);
    } catch (const std::exception&) {
      err << fmt::format("error[Usage] bad --base '{}'\n", base_text);
      return kUsage;
    }
    return cmd_asm(asm_in, asm_out, static_cast<Addr>(base), err);
  }
  if (*dis_cmd) return cmd_dis(dis_in, out, err);
  if (*run_cmd) return cmd_run(run_in, run_cfg, dump_path, report_path, out, err);
  if (*script_cmd) return cmd_script(script_in, script_cfg, out, err);
  if (*selftest_cmd) {
    const int failures = run_selftest(out);
    if (failures != 0) {
      err << fmt::format("error[Selftest] {} check(s) failed\n", failures);
      return kRuntimeFault;
    }
    return kOk;
  }
  return kUsage;
}

}  // namespace biorv::cli
