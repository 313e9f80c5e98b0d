#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "biorv/core_state.hpp"
#include "biorv/error.hpp"

namespace biorv {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational of(std::int64_t num, std::int64_t den);  // reduced, den > 0

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const;  // "p/q", or "p" when den == 1

  friend bool operator==(const Rational&, const Rational&) = default;
};

struct EnergyModel {
  static constexpr double kDefaultPjPerCycle = 17.18;
  static constexpr double kDefaultFreqHz = 50e6;

  double pj_per_cycle = kDefaultPjPerCycle;
  double freq_hz = kDefaultFreqHz;
  // Bill held (non-executing) cycles as well.
  bool always_on_clock = false;

  void validate() const;
};

// Held: the clock ran but execution was disabled for the whole budget.
enum class HaltReason { SelfLoop, BudgetExhausted, Fault, Held };

std::string_view to_string(HaltReason r);

struct Fault {
  ErrorKind kind;
  std::string message;
};

struct RunReport {
  // Executing cycles consumed by the run.
  std::uint64_t total_cycles = 0;
  std::uint64_t held_cycles = 0;
  ClassCounts retired{};
  HaltReason halt_reason = HaltReason::BudgetExhausted;
  std::optional<Fault> fault;
  CoreState final_state;

  std::optional<Rational> cpi;
  double energy_pj = 0.0;
  double avg_power_uw = 0.0;
  EnergyModel model;

  std::uint64_t retired_total() const;
  std::uint64_t retired_of(InstrClass c) const { return retired[class_index(c)]; }
};

struct EnergyEstimate {
  double energy_pj;
  double avg_power_uw;
};

// Executing cycles / retired instructions. Throws NoInstructionsRetired.
Rational compute_cpi(const RunReport& report);

// energy = billed cycles x pJ/cycle; power assumes continuous clocking at freq_hz.
EnergyEstimate estimate_energy(const RunReport& report, const EnergyModel& model);

// Fills cpi, energy_pj, avg_power_uw and model.
void annotate(RunReport& report, const EnergyModel& model);

std::string render_text(const RunReport& report);
// key=value, one per line.
std::string render_kv(const RunReport& report);

}  // namespace biorv
