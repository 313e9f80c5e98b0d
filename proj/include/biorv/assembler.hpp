#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "biorv/image.hpp"
#include "biorv/isa.hpp"

namespace biorv {

struct SourceLine {
  std::vector<std::string> labels;
  std::string mnemonic;  // empty for label-only lines; directives keep their dot
  std::vector<std::string> operands;
  int origin_line = 0;  // 1-based
};

struct SourceProgram {
  std::vector<SourceLine> lines;
};

// Grammar: `[label:]* [mnemonic operand, operand, ...]`, comments start with
// `#` or `//`. Registers are x0..x31. Immediates are decimal or 0x-hex with an
// optional sign. Directives: `.org ADDR`, `.word VALUE`.
SourceProgram parse_source(std::string_view text);

// Two passes: lay out addresses and collect labels, then encode. Branch and
// jump targets may be labels or signed byte offsets relative to the
// instruction. A leading `.org` moves the image base.
MemoryImage assemble(const SourceProgram& program, Addr base = 0);
MemoryImage assemble(std::string_view text, Addr base = 0);

// Canonical text for one word; undecodable words become `.word 0xXXXXXXXX`.
std::string disassemble_word(Word word);

// One line per word, preceded by `.org` when the image does not start at 0.
std::string disassemble(const MemoryImage& image);

}  // namespace biorv
