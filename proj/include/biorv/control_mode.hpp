#pragma once

#include <string_view>

namespace biorv {

// Derived from the IE / reset / write-enable lines:
//   reset=1                  -> ResetHold
//   reset=0, IE=1            -> Executing
//   reset=0, IE=0, we=1      -> Programming
//   reset=0, IE=0, we=0      -> Observation
enum class ControlMode { Programming, ResetHold, Executing, Observation };

constexpr ControlMode mode_from_lines(bool ie, bool reset, bool write_enable) {
  if (reset) return ControlMode::ResetHold;
  if (ie) return ControlMode::Executing;
  return write_enable ? ControlMode::Programming : ControlMode::Observation;
}

constexpr std::string_view to_string(ControlMode m) {
  switch (m) {
    case ControlMode::Programming: return "Programming";
    case ControlMode::ResetHold: return "ResetHold";
    case ControlMode::Executing: return "Executing";
    case ControlMode::Observation: return "Observation";
  }
  return "?";
}

}  // namespace biorv
