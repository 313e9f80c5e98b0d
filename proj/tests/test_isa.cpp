#include <doctest.h>

#include <random>
#include <string_view>

#include "biorv/error.hpp"
#include "biorv/isa.hpp"
#include "golden_types.hpp"

using namespace biorv;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected biorv::Error");
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("decode matches the golden encoding table") {
  for (const auto& g : golden::kGoldenEncodings) {
    CAPTURE(g.text);
    const DecodedInstruction d = decode(g.word);
    CHECK(mnemonic(d.op) == std::string_view(g.mnemonic));
    CHECK(d.rd == g.rd);
    CHECK(d.rs1 == g.rs1);
    CHECK(d.rs2 == g.rs2);
    CHECK(d.imm == g.imm);
  }
}

TEST_CASE("encode matches the golden encoding table") {
  for (const auto& g : golden::kGoldenEncodings) {
    CAPTURE(g.text);
    const DecodedInstruction in{*parse_mnemonic(g.mnemonic), static_cast<std::uint8_t>(g.rd),
                                static_cast<std::uint8_t>(g.rs1), static_cast<std::uint8_t>(g.rs2), g.imm};
    CHECK(encode(in) == g.word);
  }
}

TEST_CASE("instructions outside the subset are rejected") {
  for (const auto& g : golden::kGoldenUnsupported) {
    CAPTURE(g.text);
    CHECK(kind_of([&] { decode(g.word); }) == ErrorKind::UnsupportedInstruction);
  }
  CHECK(kind_of([] { decode(0xFFFFFFFF); }) == ErrorKind::UnsupportedInstruction);
  CHECK(kind_of([] { decode(0x00000000); }) == ErrorKind::UnsupportedInstruction);
}

TEST_CASE("decode examples") {
  CHECK(decode(0x00500093) == DecodedInstruction{Op::Addi, 1, 0, 0, 5});
  CHECK(decode(0x00000033) == DecodedInstruction{Op::Add, 0, 0, 0, 0});
  CHECK(decode(0x0000006F) == DecodedInstruction{Op::Jal, 0, 0, 0, 0});
}

TEST_CASE("encode examples") {
  CHECK(encode({Op::Addi, 1, 0, 0, 5}) == 0x00500093u);
  CHECK(encode({Op::Beq, 0, 0, 0, 0}) == 0x00000063u);
}

TEST_CASE("shift-immediate funct7 is decoded strictly") {
  const Word slli = encode({Op::Slli, 1, 2, 0, 3});
  CHECK(try_decode(slli | (1u << 25)) == std::nullopt);
  CHECK(try_decode(slli | (0b0100000u << 25)) == std::nullopt);
  const Word srli = encode({Op::Srli, 1, 2, 0, 3});
  CHECK(decode(srli | (0b0100000u << 25)).op == Op::Srai);
  CHECK(try_decode(srli | (0b1000000u << 25)) == std::nullopt);
  // R-type with a non-standard funct7 (e.g. the M extension's mul).
  CHECK(try_decode(0x02208033) == std::nullopt);
}

TEST_CASE("encode rejects immediates that do not fit") {
  CHECK(kind_of([] { encode({Op::Addi, 1, 0, 0, 2048}); }) == ErrorKind::ImmediateOutOfRange);
  CHECK(kind_of([] { encode({Op::Lw, 1, 0, 0, -2049}); }) == ErrorKind::ImmediateOutOfRange);
  CHECK(kind_of([] { encode({Op::Sw, 0, 0, 1, 4096}); }) == ErrorKind::ImmediateOutOfRange);
  CHECK(kind_of([] { encode({Op::Slli, 1, 0, 0, 32}); }) == ErrorKind::ImmediateOutOfRange);
  CHECK(kind_of([] { encode({Op::Srai, 1, 0, 0, -1}); }) == ErrorKind::ImmediateOutOfRange);
  CHECK(kind_of([] { encode({Op::Beq, 0, 0, 0, 4096}); }) == ErrorKind::ImmediateOutOfRange);
  CHECK(kind_of([] { encode({Op::Jal, 0, 0, 0, 1 << 20}); }) == ErrorKind::ImmediateOutOfRange);
  CHECK(kind_of([] { encode({Op::Beq, 0, 0, 0, 3}); }) == ErrorKind::MisalignedImmediate);
  CHECK(kind_of([] { encode({Op::Jal, 0, 0, 0, -1}); }) == ErrorKind::MisalignedImmediate);
}

TEST_CASE("cycle cost per class") {
  CHECK(cycle_cost(InstrClass::Load) == 5);
  CHECK(cycle_cost(InstrClass::Branch) == 3);
  CHECK(cycle_cost(InstrClass::RTypeAlu) == 4);
  CHECK(cycle_cost(InstrClass::ITypeAlu) == 4);
  CHECK(cycle_cost(InstrClass::Store) == 4);
  CHECK(cycle_cost(InstrClass::Jump) == 4);
}

TEST_CASE("mnemonic names round-trip") {
  for (int i = 0; i < kOpCount; ++i) {
    const auto op = static_cast<Op>(i);
    CHECK(parse_mnemonic(mnemonic(op)) == op);
  }
  CHECK(parse_mnemonic("jalr") == std::nullopt);
}

TEST_CASE("random words: decode is total and accepted words re-encode bit-exactly") {
  std::mt19937 rng(0xB10);
  std::uniform_int_distribution<Word> dist;
  int accepted = 0;
  for (int i = 0; i < 1'000'000; ++i) {
    // Half the samples use a supported opcode so the accept path is exercised.
    Word w = dist(rng);
    if (i % 2 == 0) {
      static constexpr Word kOpcodes[] = {0x33, 0x13, 0x03, 0x23, 0x63, 0x6F};
      w = (w & ~0x7Fu) | kOpcodes[w % 6];
    }
    const auto d = try_decode(w);
    if (!d) continue;
    ++accepted;
    REQUIRE(encode(*d) == w);
    REQUIRE(d->rd < 32);
    REQUIRE(d->rs1 < 32);
    REQUIRE(d->rs2 < 32);
    const InstrClass c = d->instr_class();
    if (c == InstrClass::Branch || c == InstrClass::Jump) REQUIRE(d->imm % 2 == 0);
    const int cost = cycle_cost(c);
    REQUIRE((cost >= 3 && cost <= 5));
  }
  CHECK(accepted > 10'000);
}

TEST_CASE("random canonical instructions survive encode then decode") {
  std::mt19937 rng(7);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  for (int i = 0; i < 50'000; ++i) {
    const auto op = static_cast<Op>(pick(0, kOpCount - 1));
    DecodedInstruction in{op, 0, 0, 0, 0};
    const auto r = [&] { return static_cast<std::uint8_t>(pick(0, 31)); };
    switch (class_of(op)) {
      case InstrClass::RTypeAlu: in.rd = r(); in.rs1 = r(); in.rs2 = r(); break;
      case InstrClass::ITypeAlu:
        in.rd = r();
        in.rs1 = r();
        in.imm = (op == Op::Slli || op == Op::Srli || op == Op::Srai) ? pick(0, 31) : pick(-2048, 2047);
        break;
      case InstrClass::Load: in.rd = r(); in.rs1 = r(); in.imm = pick(-2048, 2047); break;
      case InstrClass::Store: in.rs1 = r(); in.rs2 = r(); in.imm = pick(-2048, 2047); break;
      case InstrClass::Branch: in.rs1 = r(); in.rs2 = r(); in.imm = pick(-2048, 2047) * 2; break;
      case InstrClass::Jump: in.rd = r(); in.imm = pick(-(1 << 19), (1 << 19) - 1) * 2; break;
    }
    REQUIRE(decode(encode(in)) == in);
  }
}
