#include "biorv/reference.hpp"

#include <fmt/format.h>

#include "biorv/error.hpp"

namespace biorv {

namespace {

class FlatMemory {
 public:
  explicit FlatMemory(std::size_t size_bytes) : words_(size_bytes / 4, 0) {}

  Word load(Addr addr) const { return words_[index(addr)]; }
  void store(Addr addr, Word value) { words_[index(addr)] = value; }
  std::vector<Word> release() && { return std::move(words_); }

 private:
  std::size_t index(Addr addr) const {
    if (addr & 3u) throw Error(ErrorKind::MisalignedAccess, fmt::format("address 0x{:08X} is not word-aligned", addr));
    if (addr / 4 >= words_.size()) throw Error(ErrorKind::OutOfRange, fmt::format("address 0x{:08X} out of range", addr));
    return addr / 4;
  }

  std::vector<Word> words_;
};

std::int32_t as_signed(Word w) { return static_cast<std::int32_t>(w); }

}  // namespace

ReferenceResult reference_execute(const MemoryImage& image, Addr entry, std::uint64_t max_instrs,
                                  std::size_t memory_size_bytes) {
  if (memory_size_bytes == 0 || memory_size_bytes % 4 != 0) {
    throw Error(ErrorKind::InvalidArgument, "memory size must be a positive multiple of 4");
  }
  FlatMemory mem(memory_size_bytes);
  if (image.base_address % 4 != 0 || std::size_t{image.base_address} + image.words.size() * 4 > memory_size_bytes) {
    throw Error(ErrorKind::OutOfRange, "image does not fit in memory");
  }
  for (std::size_t i = 0; i < image.words.size(); ++i) mem.store(image.base_address + 4 * static_cast<Addr>(i), image.words[i]);

  ReferenceResult r;
  RegisterFile& x = r.regfile;
  Addr pc = entry;

  while (r.instr_count < max_instrs) {
    const DecodedInstruction in = decode(mem.load(pc));
    const Word rs1 = x.read(in.rs1);
    const Word rs2 = x.read(in.rs2);
    const Word imm = static_cast<Word>(in.imm);
    Addr next = pc + 4;

    switch (in.op) {
      case Op::Add: x.write(in.rd, rs1 + rs2); break;
      case Op::Sub: x.write(in.rd, rs1 - rs2); break;
      case Op::Sll: x.write(in.rd, rs1 << (rs2 & 0x1F)); break;
      case Op::Slt: x.write(in.rd, as_signed(rs1) < as_signed(rs2)); break;
      case Op::Sltu: x.write(in.rd, rs1 < rs2); break;
      case Op::Xor: x.write(in.rd, rs1 ^ rs2); break;
      case Op::Srl: x.write(in.rd, rs1 >> (rs2 & 0x1F)); break;
      case Op::Sra: x.write(in.rd, static_cast<Word>(as_signed(rs1) >> (rs2 & 0x1F))); break;
      case Op::Or: x.write(in.rd, rs1 | rs2); break;
      case Op::And: x.write(in.rd, rs1 & rs2); break;
      case Op::Addi: x.write(in.rd, rs1 + imm); break;
      case Op::Slti: x.write(in.rd, as_signed(rs1) < in.imm); break;
      case Op::Sltiu: x.write(in.rd, rs1 < imm); break;
      case Op::Xori: x.write(in.rd, rs1 ^ imm); break;
      case Op::Ori: x.write(in.rd, rs1 | imm); break;
      case Op::Andi: x.write(in.rd, rs1 & imm); break;
      case Op::Slli: x.write(in.rd, rs1 << in.imm); break;
      case Op::Srli: x.write(in.rd, rs1 >> in.imm); break;
      case Op::Srai: x.write(in.rd, static_cast<Word>(as_signed(rs1) >> in.imm)); break;
      case Op::Lw: x.write(in.rd, mem.load(rs1 + imm)); break;
      case Op::Sw: mem.store(rs1 + imm, rs2); break;
      case Op::Beq:
        if (rs1 == rs2) next = pc + imm;
        break;
      case Op::Jal:
        x.write(in.rd, pc + 4);
        next = pc + imm;
        break;
    }
    if (next & 3u) throw Error(ErrorKind::MisalignedAccess, fmt::format("control transfer to unaligned 0x{:08X}", next));

    ++r.instr_count;
    const bool self_loop = next == pc && (in.op == Op::Jal || in.op == Op::Beq);
    pc = next;
    if (self_loop) {
      r.halted = true;
      break;
    }
  }
  r.pc = pc;
  r.memory = std::move(mem).release();
  return r;
}

}  // namespace biorv
