#include <doctest.h>

#include <random>

#include "biorv/assembler.hpp"
#include "biorv/error.hpp"
#include "program_gen.hpp"

using namespace biorv;

namespace {

Error error_of(std::string_view src) {
  try {
    assemble(src);
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected an assembly error for: " << src);
  return Error(ErrorKind::Io, "unreachable");
}

}  // namespace

TEST_CASE("assemble examples") {
  CHECK(assemble("addi x1, x0, 5").words == std::vector<Word>{0x00500093});
  CHECK(assemble("").words.empty());
  CHECK(assemble("# only a comment\n\n").words.empty());
  CHECK(assemble("loop: beq x0, x0, loop").words == std::vector<Word>{0x00000063});
}

TEST_CASE("labels resolve PC-relative in both directions") {
  const auto img = assemble(R"(
start:  addi x1, x0, 1
        beq  x0, x0, end     // +8
        jal  x0, start       // -8
end:    jal  x5, end
)");
  REQUIRE(img.words.size() == 4);
  CHECK(decode(img.words[1]).imm == 8);
  CHECK(decode(img.words[2]).imm == -8);
  CHECK(decode(img.words[3]) == DecodedInstruction{Op::Jal, 5, 0, 0, 0});
}

TEST_CASE("numeric branch offsets and memory operands") {
  const auto img = assemble("beq x1, x2, -16\njal x1, 0x20\nlw x3, -4(x2)\nsw x3, (x2)\nsw x31, 0x7ff(x1)");
  CHECK(decode(img.words[0]) == DecodedInstruction{Op::Beq, 0, 1, 2, -16});
  CHECK(decode(img.words[1]) == DecodedInstruction{Op::Jal, 1, 0, 0, 32});
  CHECK(decode(img.words[2]) == DecodedInstruction{Op::Lw, 3, 2, 0, -4});
  CHECK(decode(img.words[3]) == DecodedInstruction{Op::Sw, 0, 2, 3, 0});
  CHECK(decode(img.words[4]) == DecodedInstruction{Op::Sw, 0, 1, 31, 2047});
}

TEST_CASE(".org and .word directives") {
  const auto img = assemble("addi x1, x0, 1\n.org 0x10\ndata: .word 0xCAFEBABE\n.word -1\njal x0, data");
  CHECK(img.base_address == 0);
  CHECK(img.words == std::vector<Word>{0x00100093, 0, 0, 0, 0xCAFEBABE, 0xFFFFFFFF, encode({Op::Jal, 0, 0, 0, -8})});

  const auto moved = assemble(".org 0x100\naddi x1, x0, 1");
  CHECK(moved.base_address == 0x100);
  CHECK(moved.words.size() == 1);

  const auto based = assemble("x: jal x0, x", 0x40);
  CHECK(based.base_address == 0x40);
  CHECK(decode(based.words[0]).imm == 0);
}

TEST_CASE("diagnostics carry kind and 1-based line") {
  struct Case {
    const char* src;
    ErrorKind kind;
    int line;
  };
  const Case cases[] = {
      {"addi x1, x0, 1\nfoo x1, x2, x3", ErrorKind::UnknownMnemonic, 2},
      {"jalr x1, 0(x2)", ErrorKind::UnknownMnemonic, 1},
      {"beq x0, x0, nowhere", ErrorKind::UndefinedLabel, 1},
      {"a: addi x1, x0, 1\n\na: addi x1, x0, 1", ErrorKind::DuplicateLabel, 3},
      {"add x1, x2", ErrorKind::OperandCount, 1},
      {"\njal x1", ErrorKind::OperandCount, 2},
      {"addi x1, x0, 2048", ErrorKind::ImmediateOutOfRange, 1},
      {"slli x1, x0, 32", ErrorKind::ImmediateOutOfRange, 1},
      {"beq x0, x0, 4096", ErrorKind::ImmediateOutOfRange, 1},
      {"beq x0, x0, 3", ErrorKind::BranchTargetMisaligned, 1},
      {"jal x0, -7", ErrorKind::BranchTargetMisaligned, 1},
      {"addi x32, x0, 1", ErrorKind::Syntax, 1},
      {"addi ra, x0, 1", ErrorKind::Syntax, 1},
      {"lw x1, 4[x2]", ErrorKind::Syntax, 1},
      {"addi x1, x0, five", ErrorKind::Syntax, 1},
      {".org 0x10\naddi x1,x0,1\n.org 0x8", ErrorKind::Syntax, 3},
      {".org 0x3", ErrorKind::Syntax, 1},
      {".word 0x100000000", ErrorKind::Syntax, 1},
  };
  for (const auto& c : cases) {
    CAPTURE(c.src);
    const Error e = error_of(c.src);
    CHECK(e.kind() == c.kind);
    CHECK(e.line() == c.line);
  }
}

TEST_CASE("disassemble examples") {
  CHECK(disassemble({0, {0x00500093}}) == "addi x1, x0, 5\n");
  CHECK(disassemble({0, {0xFFFFFFFF}}) == ".word 0xFFFFFFFF\n");
  CHECK(disassemble({0x20, {0x00000063}}) == ".org 0x00000020\nbeq x0, x0, 0\n");
  CHECK(disassemble_word(encode({Op::Lw, 2, 1, 0, -4})) == "lw x2, -4(x1)");
  CHECK(disassemble_word(encode({Op::Sw, 0, 1, 2, 8})) == "sw x2, 8(x1)");
  CHECK(disassemble_word(encode({Op::Srai, 3, 4, 0, 31})) == "srai x3, x4, 31");
}

TEST_CASE("assemble(disassemble(image)) reproduces decodable images") {
  testing::ProgramGenerator gen(11);
  for (int i = 0; i < 300; ++i) {
    MemoryImage img = gen.generate();
    img.base_address = static_cast<Addr>(gen.rng()() % 64) * 4;
    CHECK(assemble(disassemble(img)) == img);
  }
}

TEST_CASE("undecodable words survive the round trip as data") {
  const MemoryImage img{0, {0x00500093, 0xFFFFFFFF, 0x00000000, 0x0000006F}};
  CHECK(assemble(disassemble(img)) == img);
}

TEST_CASE("assembly is deterministic") {
  const char* src = "a: addi x1, x0, 3\nb: beq x1, x0, a\njal x2, b\n";
  CHECK(assemble(src) == assemble(src));
}

TEST_CASE("parse_source keeps labels, operands and origin lines") {
  const SourceProgram p = parse_source("\n  l1: l2: add x1, x2, x3 # c\nonly:\n");
  REQUIRE(p.lines.size() == 2);
  CHECK(p.lines[0].labels == std::vector<std::string>{"l1", "l2"});
  CHECK(p.lines[0].mnemonic == "add");
  CHECK(p.lines[0].operands == std::vector<std::string>{"x1", "x2", "x3"});
  CHECK(p.lines[0].origin_line == 2);
  CHECK(p.lines[1].mnemonic.empty());
  CHECK(p.lines[1].origin_line == 3);
}
