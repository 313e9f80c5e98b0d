#include "biorv/error.hpp"

namespace biorv {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnsupportedInstruction: return "UnsupportedInstruction";
    case ErrorKind::ImmediateOutOfRange: return "ImmediateOutOfRange";
    case ErrorKind::MisalignedImmediate: return "MisalignedImmediate";
    case ErrorKind::UnknownMnemonic: return "UnknownMnemonic";
    case ErrorKind::UndefinedLabel: return "UndefinedLabel";
    case ErrorKind::DuplicateLabel: return "DuplicateLabel";
    case ErrorKind::OperandCount: return "OperandCount";
    case ErrorKind::BranchTargetMisaligned: return "BranchTargetMisaligned";
    case ErrorKind::Syntax: return "Syntax";
    case ErrorKind::MisalignedAccess: return "MisalignedAccess";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::WriteForbiddenInMode: return "WriteForbiddenInMode";
    case ErrorKind::DoubleWritePerCycle: return "DoubleWritePerCycle";
    case ErrorKind::NotExecuting: return "NotExecuting";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::UnmappedAddress: return "UnmappedAddress";
    case ErrorKind::NoInstructionsRetired: return "NoInstructionsRetired";
    case ErrorKind::Script: return "Script";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

namespace {

std::string format_what(ErrorKind kind, const std::string& message, const std::optional<int>& line) {
  std::string out(to_string(kind));
  if (line) out += " (line " + std::to_string(*line) + ")";
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& message, std::optional<int> line)
    : std::runtime_error(format_what(kind, message, line)), kind_(kind), line_(line), message_(message) {}

}  // namespace biorv
