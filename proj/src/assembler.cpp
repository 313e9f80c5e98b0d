#include "biorv/assembler.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <map>

#include "biorv/error.hpp"

namespace biorv {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.remove_prefix(1);
  }
  int radix = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    s.remove_prefix(2);
    radix = 16;
  }
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, radix);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || v > 0xFFFFFFFFull) return std::nullopt;
  const auto value = static_cast<std::int64_t>(v);
  return negative ? -value : value;
}

std::uint8_t parse_reg(std::string_view s, int line) {
  if (s.size() >= 2 && s[0] == 'x') {
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(s.data() + 1, s.data() + s.size(), v);
    if (ec == std::errc{} && ptr == s.data() + s.size() && v < kRegCount && (s.size() == 2 || s[1] != '0')) {
      return static_cast<std::uint8_t>(v);
    }
  }
  throw Error(ErrorKind::Syntax, fmt::format("expected register x0..x31, got '{}'", s), line);
}

std::int64_t parse_imm(std::string_view s, int line) {
  auto v = parse_int(s);
  if (!v) throw Error(ErrorKind::Syntax, fmt::format("expected immediate, got '{}'", s), line);
  return *v;
}

std::int32_t check_range(std::int64_t v, std::int64_t lo, std::int64_t hi, std::string_view what, int line) {
  if (v < lo || v > hi) {
    throw Error(ErrorKind::ImmediateOutOfRange, fmt::format("{} {} outside [{}, {}]", what, v, lo, hi), line);
  }
  return static_cast<std::int32_t>(v);
}

// "imm(xN)" or "(xN)"
std::pair<std::int32_t, std::uint8_t> parse_mem_operand(std::string_view s, int line) {
  const auto open = s.find('(');
  if (open == std::string_view::npos || s.back() != ')') {
    throw Error(ErrorKind::Syntax, fmt::format("expected offset(xN), got '{}'", s), line);
  }
  const std::string_view off = trim(s.substr(0, open));
  const std::uint8_t reg = parse_reg(trim(s.substr(open + 1, s.size() - open - 2)), line);
  const std::int64_t imm = off.empty() ? 0 : parse_imm(off, line);
  return {check_range(imm, -2048, 2047, "offset", line), reg};
}

void expect_operands(const SourceLine& l, std::size_t n) {
  if (l.operands.size() != n) {
    throw Error(ErrorKind::OperandCount,
                fmt::format("{} takes {} operand(s), got {}", l.mnemonic, n, l.operands.size()), l.origin_line);
  }
}

using LabelTable = std::map<std::string, Addr, std::less<>>;

std::int32_t resolve_target(std::string_view s, Addr pc, const LabelTable& labels, int bits, int line) {
  std::int64_t offset = 0;
  if (is_identifier(s)) {
    auto it = labels.find(s);
    if (it == labels.end()) throw Error(ErrorKind::UndefinedLabel, fmt::format("undefined label '{}'", s), line);
    offset = static_cast<std::int64_t>(it->second) - static_cast<std::int64_t>(pc);
  } else {
    offset = parse_imm(s, line);
    if (offset % 2 != 0) {
      throw Error(ErrorKind::BranchTargetMisaligned, fmt::format("branch offset {} is odd", offset), line);
    }
  }
  const std::int64_t limit = std::int64_t{1} << (bits - 1);
  return check_range(offset, -limit, limit - 2, "branch offset", line);
}

DecodedInstruction build(const SourceLine& l, Op op, Addr pc, const LabelTable& labels) {
  const int line = l.origin_line;
  const auto& ops = l.operands;
  DecodedInstruction in{op, 0, 0, 0, 0};
  switch (class_of(op)) {
    case InstrClass::RTypeAlu:
      expect_operands(l, 3);
      in.rd = parse_reg(ops[0], line);
      in.rs1 = parse_reg(ops[1], line);
      in.rs2 = parse_reg(ops[2], line);
      break;
    case InstrClass::ITypeAlu: {
      expect_operands(l, 3);
      in.rd = parse_reg(ops[0], line);
      in.rs1 = parse_reg(ops[1], line);
      const std::int64_t imm = parse_imm(ops[2], line);
      const bool shift = op == Op::Slli || op == Op::Srli || op == Op::Srai;
      in.imm = shift ? check_range(imm, 0, 31, "shift amount", line) : check_range(imm, -2048, 2047, "immediate", line);
      break;
    }
    case InstrClass::Load: {
      expect_operands(l, 2);
      in.rd = parse_reg(ops[0], line);
      std::tie(in.imm, in.rs1) = parse_mem_operand(ops[1], line);
      break;
    }
    case InstrClass::Store: {
      expect_operands(l, 2);
      in.rs2 = parse_reg(ops[0], line);
      std::tie(in.imm, in.rs1) = parse_mem_operand(ops[1], line);
      break;
    }
    case InstrClass::Branch:
      expect_operands(l, 3);
      in.rs1 = parse_reg(ops[0], line);
      in.rs2 = parse_reg(ops[1], line);
      in.imm = resolve_target(ops[2], pc, labels, 13, line);
      break;
    case InstrClass::Jump:
      expect_operands(l, 2);
      in.rd = parse_reg(ops[0], line);
      in.imm = resolve_target(ops[1], pc, labels, 21, line);
      break;
  }
  return in;
}

Addr parse_org(const SourceLine& l) {
  expect_operands(l, 1);
  const std::int64_t v = parse_imm(l.operands[0], l.origin_line);
  if (v < 0 || v > 0xFFFFFFFC) throw Error(ErrorKind::ImmediateOutOfRange, ".org address out of range", l.origin_line);
  if (v % 4 != 0) {
    throw Error(ErrorKind::Syntax, fmt::format(".org address 0x{:X} is not word-aligned", v), l.origin_line);
  }
  return static_cast<Addr>(v);
}

Word parse_word_directive(const SourceLine& l) {
  expect_operands(l, 1);
  const std::int64_t v = parse_imm(l.operands[0], l.origin_line);
  if (v < -(std::int64_t{1} << 31) || v > 0xFFFFFFFF) {
    throw Error(ErrorKind::ImmediateOutOfRange, fmt::format(".word value {} does not fit in 32 bits", v), l.origin_line);
  }
  return static_cast<Word>(static_cast<std::uint64_t>(v));
}

}  // namespace

SourceProgram parse_source(std::string_view text) {
  SourceProgram prog;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    raw = raw.substr(0, std::min(raw.find('#'), raw.find("//")));
    std::string_view rest = trim(raw);
    if (rest.empty()) continue;

    SourceLine line;
    line.origin_line = line_no;
    for (auto colon = rest.find(':'); colon != std::string_view::npos; colon = rest.find(':')) {
      const std::string_view label = trim(rest.substr(0, colon));
      if (!is_identifier(label)) throw Error(ErrorKind::Syntax, fmt::format("bad label '{}'", label), line_no);
      line.labels.emplace_back(label);
      rest = trim(rest.substr(colon + 1));
    }
    if (!rest.empty()) {
      const auto ws = rest.find_first_of(" \t");
      line.mnemonic = std::string(rest.substr(0, ws));
      std::string_view operands = ws == std::string_view::npos ? std::string_view{} : trim(rest.substr(ws));
      if (!operands.empty()) {
        for (;;) {
          const auto comma = operands.find(',');
          const std::string_view op = trim(operands.substr(0, comma));
          if (op.empty()) throw Error(ErrorKind::Syntax, "empty operand", line_no);
          line.operands.emplace_back(op);
          if (comma == std::string_view::npos) break;
          operands = operands.substr(comma + 1);
        }
      }
    }
    prog.lines.push_back(std::move(line));
  }
  return prog;
}

MemoryImage assemble(const SourceProgram& program, Addr base) {
  if (base % 4 != 0) throw Error(ErrorKind::InvalidArgument, fmt::format("base 0x{:08X} is not word-aligned", base));

  // Pass 1: addresses and labels.
  LabelTable labels;
  std::vector<Addr> addr_of(program.lines.size(), 0);
  Addr image_base = base;
  Addr pc = base;
  bool emitted = false;
  for (std::size_t i = 0; i < program.lines.size(); ++i) {
    const SourceLine& l = program.lines[i];
    if (l.mnemonic == ".org") {
      const Addr target = parse_org(l);
      if (!emitted) {
        image_base = target;
      } else if (target < pc) {
        throw Error(ErrorKind::Syntax, fmt::format(".org 0x{:X} is behind the current address 0x{:X}", target, pc),
                    l.origin_line);
      }
      pc = target;
    }
    for (const auto& label : l.labels) {
      if (!labels.emplace(label, pc).second) {
        throw Error(ErrorKind::DuplicateLabel, fmt::format("label '{}' already defined", label), l.origin_line);
      }
    }
    addr_of[i] = pc;
    if (l.mnemonic.empty() || l.mnemonic == ".org") continue;
    if (l.mnemonic != ".word" && !parse_mnemonic(l.mnemonic)) {
      throw Error(ErrorKind::UnknownMnemonic, fmt::format("unknown mnemonic '{}'", l.mnemonic), l.origin_line);
    }
    if (pc > 0xFFFFFFFC) throw Error(ErrorKind::OutOfRange, "program runs past the address space", l.origin_line);
    pc += 4;
    emitted = true;
  }

  // Pass 2: encode.
  MemoryImage image{image_base, {}};
  for (std::size_t i = 0; i < program.lines.size(); ++i) {
    const SourceLine& l = program.lines[i];
    if (l.mnemonic.empty() || l.mnemonic == ".org") continue;
    const Addr at = addr_of[i];
    image.words.resize((at - image_base) / 4, 0);
    if (l.mnemonic == ".word") {
      image.words.push_back(parse_word_directive(l));
      continue;
    }
    const DecodedInstruction in = build(l, *parse_mnemonic(l.mnemonic), at, labels);
    try {
      image.words.push_back(encode(in));
    } catch (const Error& e) {
      throw Error(e.kind(), e.message(), l.origin_line);
    }
  }
  return image;
}

MemoryImage assemble(std::string_view text, Addr base) { return assemble(parse_source(text), base); }

std::string disassemble_word(Word word) {
  if (auto d = try_decode(word)) return format_instruction(*d);
  return fmt::format(".word 0x{:08X}", word);
}

std::string disassemble(const MemoryImage& image) {
  std::string out;
  if (image.base_address != 0) out += fmt::format(".org 0x{:08X}\n", image.base_address);
  for (Word w : image.words) {
    out += disassemble_word(w);
    out += '\n';
  }
  return out;
}

}  // namespace biorv
