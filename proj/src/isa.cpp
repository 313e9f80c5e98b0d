#include "biorv/isa.hpp"

#include <array>
#include <fmt/format.h>

#include "biorv/error.hpp"

namespace biorv {

namespace {

constexpr Word kOpcodeOp = 0b0110011;
constexpr Word kOpcodeOpImm = 0b0010011;
constexpr Word kOpcodeLoad = 0b0000011;
constexpr Word kOpcodeStore = 0b0100011;
constexpr Word kOpcodeBranch = 0b1100011;
constexpr Word kOpcodeJal = 0b1101111;

constexpr Word kFunct7Alt = 0b0100000;

struct OpInfo {
  Op op;
  std::string_view name;
  InstrClass cls;
  Word funct3;
  Word funct7;
};

constexpr std::array<OpInfo, kOpCount> kOps = {{
    {Op::Add, "add", InstrClass::RTypeAlu, 0b000, 0},
    {Op::Sub, "sub", InstrClass::RTypeAlu, 0b000, kFunct7Alt},
    {Op::Sll, "sll", InstrClass::RTypeAlu, 0b001, 0},
    {Op::Slt, "slt", InstrClass::RTypeAlu, 0b010, 0},
    {Op::Sltu, "sltu", InstrClass::RTypeAlu, 0b011, 0},
    {Op::Xor, "xor", InstrClass::RTypeAlu, 0b100, 0},
    {Op::Srl, "srl", InstrClass::RTypeAlu, 0b101, 0},
    {Op::Sra, "sra", InstrClass::RTypeAlu, 0b101, kFunct7Alt},
    {Op::Or, "or", InstrClass::RTypeAlu, 0b110, 0},
    {Op::And, "and", InstrClass::RTypeAlu, 0b111, 0},
    {Op::Addi, "addi", InstrClass::ITypeAlu, 0b000, 0},
    {Op::Slti, "slti", InstrClass::ITypeAlu, 0b010, 0},
    {Op::Sltiu, "sltiu", InstrClass::ITypeAlu, 0b011, 0},
    {Op::Xori, "xori", InstrClass::ITypeAlu, 0b100, 0},
    {Op::Ori, "ori", InstrClass::ITypeAlu, 0b110, 0},
    {Op::Andi, "andi", InstrClass::ITypeAlu, 0b111, 0},
    {Op::Slli, "slli", InstrClass::ITypeAlu, 0b001, 0},
    {Op::Srli, "srli", InstrClass::ITypeAlu, 0b101, 0},
    {Op::Srai, "srai", InstrClass::ITypeAlu, 0b101, kFunct7Alt},
    {Op::Lw, "lw", InstrClass::Load, 0b010, 0},
    {Op::Sw, "sw", InstrClass::Store, 0b010, 0},
    {Op::Beq, "beq", InstrClass::Branch, 0b000, 0},
    {Op::Jal, "jal", InstrClass::Jump, 0, 0},
}};

const OpInfo& info(Op op) { return kOps[static_cast<std::size_t>(op)]; }

bool is_shift_imm(Op op) { return op == Op::Slli || op == Op::Srli || op == Op::Srai; }

constexpr Word bits(Word w, int hi, int lo) { return (w >> lo) & ((Word{1} << (hi - lo + 1)) - 1); }

constexpr std::int32_t sign_extend(Word value, int width) {
  const Word sign = Word{1} << (width - 1);
  return static_cast<std::int32_t>((value ^ sign) - sign);
}

bool fits_signed(std::int32_t v, int width) {
  const std::int64_t lo = -(std::int64_t{1} << (width - 1));
  const std::int64_t hi = (std::int64_t{1} << (width - 1)) - 1;
  return v >= lo && v <= hi;
}

std::int32_t imm_i(Word w) { return sign_extend(bits(w, 31, 20), 12); }
std::int32_t imm_s(Word w) { return sign_extend((bits(w, 31, 25) << 5) | bits(w, 11, 7), 12); }
std::int32_t imm_b(Word w) {
  return sign_extend((bits(w, 31, 31) << 12) | (bits(w, 7, 7) << 11) | (bits(w, 30, 25) << 5) |
                         (bits(w, 11, 8) << 1),
                     13);
}
std::int32_t imm_j(Word w) {
  return sign_extend((bits(w, 31, 31) << 20) | (bits(w, 19, 12) << 12) | (bits(w, 20, 20) << 11) |
                         (bits(w, 30, 21) << 1),
                     21);
}

[[noreturn]] void unsupported(Word word, std::string_view why) {
  throw Error(ErrorKind::UnsupportedInstruction, fmt::format("0x{:08X}: {}", word, why));
}

std::optional<Op> find_op(InstrClass cls, Word funct3, Word funct7) {
  for (const auto& o : kOps) {
    if (o.cls == cls && o.funct3 == funct3 && o.funct7 == funct7) return o.op;
  }
  return std::nullopt;
}

DecodedInstruction decode_or_throw(Word word) {
  const Word opcode = bits(word, 6, 0);
  const auto rd = static_cast<std::uint8_t>(bits(word, 11, 7));
  const Word funct3 = bits(word, 14, 12);
  const auto rs1 = static_cast<std::uint8_t>(bits(word, 19, 15));
  const auto rs2 = static_cast<std::uint8_t>(bits(word, 24, 20));
  const Word funct7 = bits(word, 31, 25);

  switch (opcode) {
    case kOpcodeOp: {
      auto op = find_op(InstrClass::RTypeAlu, funct3, funct7);
      if (!op) unsupported(word, "register ALU funct3/funct7 outside subset");
      return {*op, rd, rs1, rs2, 0};
    }
    case kOpcodeOpImm: {
      if (funct3 == 0b001 || funct3 == 0b101) {
        auto op = find_op(InstrClass::ITypeAlu, funct3, funct7);
        if (!op) unsupported(word, "shift-immediate funct7 must be 0000000 or 0100000");
        return {*op, rd, rs1, 0, static_cast<std::int32_t>(rs2)};
      }
      auto op = find_op(InstrClass::ITypeAlu, funct3, 0);
      if (!op) unsupported(word, "immediate ALU funct3 outside subset");
      return {*op, rd, rs1, 0, imm_i(word)};
    }
    case kOpcodeLoad:
      if (funct3 != 0b010) unsupported(word, "only lw is supported among loads");
      return {Op::Lw, rd, rs1, 0, imm_i(word)};
    case kOpcodeStore:
      if (funct3 != 0b010) unsupported(word, "only sw is supported among stores");
      return {Op::Sw, 0, rs1, rs2, imm_s(word)};
    case kOpcodeBranch:
      if (funct3 != 0b000) unsupported(word, "only beq is supported among branches");
      return {Op::Beq, 0, rs1, rs2, imm_b(word)};
    case kOpcodeJal:
      return {Op::Jal, rd, 0, 0, imm_j(word)};
    default:
      unsupported(word, fmt::format("opcode 0b{:07b} not supported", opcode));
  }
}

void check_imm(const DecodedInstruction& in, int width) {
  if (!fits_signed(in.imm, width)) {
    throw Error(ErrorKind::ImmediateOutOfRange,
                fmt::format("{} immediate {} does not fit in {} signed bits", mnemonic(in.op), in.imm, width));
  }
}

void check_reg(std::uint8_t r) {
  if (r >= kRegCount) throw Error(ErrorKind::InvalidArgument, fmt::format("register index {} out of range", r));
}

}  // namespace

InstrClass class_of(Op op) { return info(op).cls; }

InstrClass DecodedInstruction::instr_class() const { return class_of(op); }

std::string_view mnemonic(Op op) { return info(op).name; }

std::optional<Op> parse_mnemonic(std::string_view text) {
  for (const auto& o : kOps) {
    if (o.name == text) return o.op;
  }
  return std::nullopt;
}

std::string_view to_string(InstrClass c) {
  switch (c) {
    case InstrClass::RTypeAlu: return "RTypeAlu";
    case InstrClass::ITypeAlu: return "ITypeAlu";
    case InstrClass::Load: return "Load";
    case InstrClass::Store: return "Store";
    case InstrClass::Branch: return "Branch";
    case InstrClass::Jump: return "Jump";
  }
  return "?";
}

DecodedInstruction decode(Word word) { return decode_or_throw(word); }

std::optional<DecodedInstruction> try_decode(Word word) {
  try {
    return decode_or_throw(word);
  } catch (const Error&) {
    return std::nullopt;
  }
}

Word encode(const DecodedInstruction& in) {
  check_reg(in.rd);
  check_reg(in.rs1);
  check_reg(in.rs2);
  const OpInfo& o = info(in.op);
  const Word rd = Word{in.rd} << 7;
  const Word rs1 = Word{in.rs1} << 15;
  const Word rs2 = Word{in.rs2} << 20;
  const Word f3 = o.funct3 << 12;
  const auto imm = static_cast<Word>(in.imm);

  switch (o.cls) {
    case InstrClass::RTypeAlu:
      return (o.funct7 << 25) | rs2 | rs1 | f3 | rd | kOpcodeOp;
    case InstrClass::ITypeAlu:
      if (is_shift_imm(in.op)) {
        if (in.imm < 0 || in.imm > 31) {
          throw Error(ErrorKind::ImmediateOutOfRange,
                      fmt::format("{} shift amount {} outside 0..31", o.name, in.imm));
        }
        return (o.funct7 << 25) | (imm << 20) | rs1 | f3 | rd | kOpcodeOpImm;
      }
      check_imm(in, 12);
      return ((imm & 0xFFF) << 20) | rs1 | f3 | rd | kOpcodeOpImm;
    case InstrClass::Load:
      check_imm(in, 12);
      return ((imm & 0xFFF) << 20) | rs1 | f3 | rd | kOpcodeLoad;
    case InstrClass::Store:
      check_imm(in, 12);
      return (bits(imm, 11, 5) << 25) | rs2 | rs1 | f3 | (bits(imm, 4, 0) << 7) | kOpcodeStore;
    case InstrClass::Branch:
      check_imm(in, 13);
      if (in.imm & 1) throw Error(ErrorKind::MisalignedImmediate, fmt::format("beq offset {} is odd", in.imm));
      return (bits(imm, 12, 12) << 31) | (bits(imm, 10, 5) << 25) | rs2 | rs1 | f3 | (bits(imm, 4, 1) << 8) |
             (bits(imm, 11, 11) << 7) | kOpcodeBranch;
    case InstrClass::Jump:
      check_imm(in, 21);
      if (in.imm & 1) throw Error(ErrorKind::MisalignedImmediate, fmt::format("jal offset {} is odd", in.imm));
      return (bits(imm, 20, 20) << 31) | (bits(imm, 10, 1) << 21) | (bits(imm, 11, 11) << 20) |
             (bits(imm, 19, 12) << 12) | rd | kOpcodeJal;
  }
  return 0;
}

std::string format_instruction(const DecodedInstruction& in) {
  const std::string_view name = mnemonic(in.op);
  switch (in.instr_class()) {
    case InstrClass::RTypeAlu:
      return fmt::format("{} x{}, x{}, x{}", name, in.rd, in.rs1, in.rs2);
    case InstrClass::ITypeAlu:
      return fmt::format("{} x{}, x{}, {}", name, in.rd, in.rs1, in.imm);
    case InstrClass::Load:
      return fmt::format("{} x{}, {}(x{})", name, in.rd, in.imm, in.rs1);
    case InstrClass::Store:
      return fmt::format("{} x{}, {}(x{})", name, in.rs2, in.imm, in.rs1);
    case InstrClass::Branch:
      return fmt::format("{} x{}, x{}, {}", name, in.rs1, in.rs2, in.imm);
    case InstrClass::Jump:
      return fmt::format("{} x{}, {}", name, in.rd, in.imm);
  }
  return {};
}

}  // namespace biorv
