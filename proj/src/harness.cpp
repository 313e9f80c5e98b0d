#include "biorv/harness.hpp"

#include <fmt/format.h>

#include <charconv>
#include <ostream>

#include "biorv/error.hpp"

namespace biorv {

void program_and_start(Simulator& sim, const MemoryImage& image) {
  try {
    apply_control(sim.core, /*ie=*/false, /*reset=*/false, /*write_enable=*/true);
    sim.memory.load_image(image, sim.core.mode);
    apply_control(sim.core, false, true, false);
    step_cycle(sim.core, sim.bus());
    apply_control(sim.core, true, false, false);
  } catch (...) {
    apply_control(sim.core, false, false, false);
    throw;
  }
}

namespace {

void restore_mode(CoreState& core, ControlMode prior) {
  switch (prior) {
    case ControlMode::Programming: apply_control(core, false, false, true); break;
    case ControlMode::ResetHold: apply_control(core, false, true, false); break;
    case ControlMode::Observation:
    case ControlMode::Executing: break;
  }
}

}  // namespace

Observation observe(Simulator& sim, Addr addr, std::size_t len_bytes) {
  const ControlMode prior = sim.core.mode;
  apply_control(sim.core, false, false, false);
  Observation obs;
  obs.stopped_execution = prior == ControlMode::Executing;
  try {
    obs.words = sim.memory.snapshot(addr, len_bytes);
  } catch (...) {
    restore_mode(sim.core, prior);
    throw;
  }
  restore_mode(sim.core, prior);
  return obs;
}

RunReport run_cycles(Simulator& sim, std::uint64_t cycles, const EnergyModel& model, HaltPolicy halt,
                     const TraceSink& trace) {
  if (cycles == 0) throw Error(ErrorKind::InvalidArgument, "cycle count must be positive");
  if (sim.core.mode == ControlMode::Executing) return run(sim.core, sim.bus(), cycles, halt, model, trace);

  RunReport report;
  for (std::uint64_t i = 0; i < cycles; ++i) {
    const TraceRecord rec = step_cycle(sim.core, sim.bus());
    if (trace) trace(rec);
  }
  report.held_cycles = cycles;
  report.halt_reason = HaltReason::Held;
  report.final_state = sim.core;
  annotate(report, model);
  return report;
}

void BringUpScript::validate() const {
  bool reset_seen = false;
  for (const auto& s : steps) {
    if (std::holds_alternative<step::PulseReset>(s.action)) reset_seen = true;
    if (std::holds_alternative<step::StartExecution>(s.action) && !reset_seen) {
      throw Error(ErrorKind::Script, "'start' before any 'reset'", s.line);
    }
  }
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> toks;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const auto start = line.find_first_not_of(" \t\r", pos);
    if (start == std::string_view::npos) break;
    const auto end = std::min(line.find_first_of(" \t\r", start), line.size());
    toks.push_back(line.substr(start, end - start));
    pos = end;
  }
  return toks;
}

std::uint64_t parse_u64(std::string_view tok, int line) {
  int base = 10;
  if (tok.starts_with("0x") || tok.starts_with("0X")) {
    tok.remove_prefix(2);
    base = 16;
  }
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v, base);
  if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw Error(ErrorKind::Script, fmt::format("bad number '{}'", tok), line);
  }
  return v;
}

void expect_args(const std::vector<std::string_view>& toks, std::size_t n, int line) {
  if (toks.size() != n + 1) {
    throw Error(ErrorKind::Script, fmt::format("'{}' takes {} argument(s)", toks[0], n), line);
  }
}

}  // namespace

BringUpScript parse_script(std::string_view text, const std::filesystem::path& base_dir) {
  BringUpScript script;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    const auto toks = split_ws(line.substr(0, line.find('#')));
    if (toks.empty()) continue;
    const std::string_view cmd = toks[0];
    ScriptStep s;
    s.line = line_no;
    if (cmd == "load") {
      expect_args(toks, 1, line_no);
      std::filesystem::path p(toks[1]);
      if (p.is_relative()) p = base_dir / p;
      try {
        s.action = step::LoadImage{read_hex_file(p), std::string(toks[1])};
      } catch (const Error& e) {
        throw Error(e.kind(), e.message(), line_no);
      }
    } else if (cmd == "reset") {
      expect_args(toks, 0, line_no);
      s.action = step::PulseReset{};
    } else if (cmd == "start") {
      expect_args(toks, 0, line_no);
      s.action = step::StartExecution{};
    } else if (cmd == "stop") {
      expect_args(toks, 0, line_no);
      s.action = step::StopExecution{};
    } else if (cmd == "observe") {
      expect_args(toks, 2, line_no);
      const std::uint64_t addr = parse_u64(toks[1], line_no);
      if (addr > 0xFFFFFFFF) throw Error(ErrorKind::Script, "observe address beyond 32 bits", line_no);
      s.action = step::Observe{static_cast<Addr>(addr), static_cast<std::size_t>(parse_u64(toks[2], line_no))};
    } else if (cmd == "run") {
      expect_args(toks, 1, line_no);
      const std::uint64_t n = parse_u64(toks[1], line_no);
      if (n == 0) throw Error(ErrorKind::Script, "'run' needs a positive cycle count", line_no);
      s.action = step::RunCycles{n};
    } else {
      throw Error(ErrorKind::Script, fmt::format("unknown command '{}'", cmd), line_no);
    }
    script.steps.push_back(std::move(s));
  }
  return script;
}

ScriptResult run_script(Simulator& sim, const BringUpScript& script, std::ostream& out, const EnergyModel& model,
                        const TraceSink& trace) {
  script.validate();
  ScriptResult result;
  for (const auto& s : script.steps) {
    try {
      if (const auto* load = std::get_if<step::LoadImage>(&s.action)) {
        if (sim.core.mode == ControlMode::Executing) {
          throw Error(ErrorKind::WriteForbiddenInMode, "external load while executing; issue 'stop' first");
        }
        apply_control(sim.core, false, false, true);
        const std::size_t n = sim.memory.load_image(load->image, sim.core.mode);
        out << fmt::format("# load {}: {} words at 0x{:08x}\n", load->source, n, load->image.base_address);
      } else if (std::holds_alternative<step::PulseReset>(s.action)) {
        apply_control(sim.core, false, true, false);
        step_cycle(sim.core, sim.bus());
        apply_control(sim.core, false, false, false);
        out << "# reset: pc=0x00000000\n";
      } else if (std::holds_alternative<step::StartExecution>(s.action)) {
        apply_control(sim.core, true, false, false);
        out << fmt::format("# start: pc=0x{:08x}\n", sim.core.pc);
      } else if (std::holds_alternative<step::StopExecution>(s.action)) {
        apply_control(sim.core, false, false, false);
        out << fmt::format("# stop: pc=0x{:08x} state={}\n", sim.core.pc, to_string(sim.core.fsm));
      } else if (const auto* obs = std::get_if<step::Observe>(&s.action)) {
        Observation o = observe(sim, obs->addr, obs->len_bytes);
        out << fmt::format("# observe 0x{:08x} {}{}\n", obs->addr, obs->len_bytes,
                           o.stopped_execution ? " (execution stopped)" : "");
        // Always emit the address record so the dump reloads at the right place.
        out << fmt::format("@{:08x}\n", o.words.base_address / 4);
        for (Word w : o.words.words) out << fmt::format("{:08x}\n", w);
        result.observations.push_back(std::move(o));
      } else if (const auto* rc = std::get_if<step::RunCycles>(&s.action)) {
        RunReport r = run_cycles(sim, rc->cycles, model, {}, trace);
        out << fmt::format("# run {}\n", rc->cycles) << render_kv(r);
        const bool faulted = r.halt_reason == HaltReason::Fault;
        result.reports.push_back(std::move(r));
        if (faulted) {
          result.faulted = true;
          return result;
        }
      }
    } catch (const Error& e) {
      throw Error(e.kind(), e.message(), s.line);
    }
  }
  return result;
}

}  // namespace biorv
