#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace biorv {

enum class ErrorKind {
  // isa
  UnsupportedInstruction,
  ImmediateOutOfRange,
  MisalignedImmediate,
  // assembler
  UnknownMnemonic,
  UndefinedLabel,
  DuplicateLabel,
  OperandCount,
  BranchTargetMisaligned,
  Syntax,
  // memory
  MisalignedAccess,
  OutOfRange,
  WriteForbiddenInMode,
  DoubleWritePerCycle,
  // core / harness / metrics
  NotExecuting,
  InvalidArgument,
  UnmappedAddress,
  NoInstructionsRetired,
  Script,
  Io,
};

std::string_view to_string(ErrorKind kind);

// Every failure in the library is reported through this type. `line` is the
// 1-based source line for text inputs; `pc` is set when the failure happened
// while the core was executing.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::optional<int> line = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  const std::optional<int>& line() const noexcept { return line_; }
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::optional<int> line_;
  std::string message_;
};

}  // namespace biorv
