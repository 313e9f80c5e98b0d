#include "biorv/metrics.hpp"

#include <fmt/format.h>

#include <numeric>

namespace biorv {

Rational Rational::of(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
}

std::string Rational::to_string() const {
  return den == 1 ? fmt::format("{}", num) : fmt::format("{}/{}", num, den);
}

void EnergyModel::validate() const {
  if (!(pj_per_cycle > 0.0) || !(freq_hz > 0.0)) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("energy model needs positive pJ/cycle and frequency (got {}, {})", pj_per_cycle, freq_hz));
  }
}

std::string_view to_string(HaltReason r) {
  switch (r) {
    case HaltReason::SelfLoop: return "self-loop";
    case HaltReason::BudgetExhausted: return "cycle-budget-exhausted";
    case HaltReason::Fault: return "fault";
    case HaltReason::Held: return "held";
  }
  return "?";
}

std::uint64_t RunReport::retired_total() const { return std::accumulate(retired.begin(), retired.end(), std::uint64_t{0}); }

Rational compute_cpi(const RunReport& report) {
  const std::uint64_t n = report.retired_total();
  if (n == 0) throw Error(ErrorKind::NoInstructionsRetired, "CPI undefined with zero retired instructions");
  return Rational::of(static_cast<std::int64_t>(report.total_cycles), static_cast<std::int64_t>(n));
}

EnergyEstimate estimate_energy(const RunReport& report, const EnergyModel& model) {
  model.validate();
  std::uint64_t billed = report.total_cycles;
  if (model.always_on_clock) billed += report.held_cycles;
  return {static_cast<double>(billed) * model.pj_per_cycle, model.pj_per_cycle * model.freq_hz * 1e-6};
}

void annotate(RunReport& report, const EnergyModel& model) {
  report.model = model;
  report.cpi = report.retired_total() > 0 ? std::optional(compute_cpi(report)) : std::nullopt;
  const auto e = estimate_energy(report, model);
  report.energy_pj = e.energy_pj;
  report.avg_power_uw = e.avg_power_uw;
}

namespace {

constexpr std::array<InstrClass, kClassCount> kClasses = {InstrClass::RTypeAlu, InstrClass::ITypeAlu,
                                                          InstrClass::Load,     InstrClass::Store,
                                                          InstrClass::Branch,   InstrClass::Jump};

std::string cpi_decimal(const RunReport& r) { return r.cpi ? fmt::format("{:.4f}", r.cpi->value()) : "n/a"; }

}  // namespace

std::string render_text(const RunReport& r) {
  std::string out;
  out += fmt::format("halt reason      : {}\n", to_string(r.halt_reason));
  if (r.fault) out += fmt::format("fault            : {}: {}\n", to_string(r.fault->kind), r.fault->message);
  out += fmt::format("cycles           : {}\n", r.total_cycles);
  out += fmt::format("held cycles      : {}\n", r.held_cycles);
  out += fmt::format("retired          : {}\n", r.retired_total());
  for (InstrClass c : kClasses) {
    out += fmt::format("  {:<14} : {} x {} cycles\n", to_string(c), r.retired_of(c), cycle_cost(c));
  }
  out += fmt::format("CPI              : {} ({})\n", r.cpi ? r.cpi->to_string() : "n/a", cpi_decimal(r));
  out += fmt::format("energy           : {:.2f} pJ at {} pJ/cycle\n", r.energy_pj, r.model.pj_per_cycle);
  out += fmt::format("avg power        : {:.2f} uW at {:.0f} Hz\n", r.avg_power_uw, r.model.freq_hz);
  out += fmt::format("final pc         : 0x{:08x}\n", r.final_state.pc);
  const auto& regs = r.final_state.regfile.values();
  for (int i = 0; i < kRegCount; i += 4) {
    out += fmt::format("  x{:<2} {:08x}  x{:<2} {:08x}  x{:<2} {:08x}  x{:<2} {:08x}\n", i, regs[i], i + 1, regs[i + 1],
                       i + 2, regs[i + 2], i + 3, regs[i + 3]);
  }
  return out;
}

std::string render_kv(const RunReport& r) {
  std::string out;
  out += fmt::format("halt_reason={}\n", to_string(r.halt_reason));
  if (r.fault) {
    out += fmt::format("fault_kind={}\n", to_string(r.fault->kind));
    out += fmt::format("fault_message={}\n", r.fault->message);
  }
  out += fmt::format("total_cycles={}\n", r.total_cycles);
  out += fmt::format("held_cycles={}\n", r.held_cycles);
  out += fmt::format("retired={}\n", r.retired_total());
  for (InstrClass c : kClasses) out += fmt::format("retired.{}={}\n", to_string(c), r.retired_of(c));
  out += fmt::format("cpi={}\n", r.cpi ? r.cpi->to_string() : "n/a");
  out += fmt::format("cpi_decimal={}\n", cpi_decimal(r));
  out += fmt::format("energy_pj={:.6f}\n", r.energy_pj);
  out += fmt::format("avg_power_uw={:.6f}\n", r.avg_power_uw);
  out += fmt::format("pj_per_cycle={}\n", r.model.pj_per_cycle);
  out += fmt::format("freq_hz={}\n", r.model.freq_hz);
  out += fmt::format("final_pc=0x{:08x}\n", r.final_state.pc);
  const auto& regs = r.final_state.regfile.values();
  for (int i = 0; i < kRegCount; ++i) out += fmt::format("x{}=0x{:08x}\n", i, regs[i]);
  return out;
}

}  // namespace biorv
