#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace biorv {

using Word = std::uint32_t;
using Addr = std::uint32_t;

enum class InstrClass { RTypeAlu, ITypeAlu, Load, Store, Branch, Jump };

// The supported subset: RV32I register ALU ops, immediate ALU ops, lw, sw,
// beq and jal. Everything else decodes to UnsupportedInstruction.
enum class Op {
  Add, Sub, Sll, Slt, Sltu, Xor, Srl, Sra, Or, And,
  Addi, Slti, Sltiu, Xori, Ori, Andi, Slli, Srli, Srai,
  Lw,
  Sw,
  Beq,
  Jal,
};

inline constexpr int kOpCount = static_cast<int>(Op::Jal) + 1;
inline constexpr int kRegCount = 32;

struct DecodedInstruction {
  Op op = Op::Add;
  std::uint8_t rd = 0;
  std::uint8_t rs1 = 0;
  std::uint8_t rs2 = 0;
  // Sign-extended immediate. For slli/srli/srai this is the shift amount.
  std::int32_t imm = 0;

  InstrClass instr_class() const;

  friend bool operator==(const DecodedInstruction&, const DecodedInstruction&) = default;
};

InstrClass class_of(Op op);
std::string_view mnemonic(Op op);
std::optional<Op> parse_mnemonic(std::string_view text);
std::string_view to_string(InstrClass c);

// Fixed multi-cycle latency per class: loads 5, branches 3, everything else 4.
constexpr int cycle_cost(InstrClass c) {
  switch (c) {
    case InstrClass::Load: return 5;
    case InstrClass::Branch: return 3;
    case InstrClass::RTypeAlu:
    case InstrClass::ITypeAlu:
    case InstrClass::Store:
    case InstrClass::Jump: return 4;
  }
  return 0;
}

// Throws Error{UnsupportedInstruction} for any word outside the subset.
DecodedInstruction decode(Word word);
std::optional<DecodedInstruction> try_decode(Word word);

// Fields not used by the instruction's format are ignored. Throws
// ImmediateOutOfRange or MisalignedImmediate.
Word encode(const DecodedInstruction& instr);

// Canonical assembly text, e.g. "addi x1, x0, 5" or "lw x2, 4(x1)".
std::string format_instruction(const DecodedInstruction& instr);

}  // namespace biorv
