#include "biorv/image.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>

#include "biorv/error.hpp"

namespace biorv {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string_view strip_comment(std::string_view s) {
  const auto slash = s.find("//");
  const auto hash = s.find('#');
  return s.substr(0, std::min(slash, hash));
}

std::uint64_t parse_hex_field(std::string_view text, int line) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value, 16);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw Error(ErrorKind::Syntax, fmt::format("bad hex value '{}'", text), line);
  }
  return value;
}

}  // namespace

MemoryImage parse_hex_image(std::string_view text) {
  MemoryImage image;
  bool have_base = false;
  std::uint64_t next_word = 0;
  int line_no = 0;

  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.front() == '@') {
      const std::uint64_t word_addr = parse_hex_field(trim(line.substr(1)), line_no);
      if (word_addr > 0x3FFFFFFF) throw Error(ErrorKind::OutOfRange, "address record beyond 32-bit space", line_no);
      if (!have_base && image.words.empty()) {
        image.base_address = static_cast<Addr>(word_addr * 4);
        next_word = word_addr;
        have_base = true;
        continue;
      }
      if (word_addr < next_word) {
        throw Error(ErrorKind::Syntax, fmt::format("address record @{:x} moves backwards", word_addr), line_no);
      }
      image.words.resize(image.words.size() + (word_addr - next_word), 0);
      next_word = word_addr;
      continue;
    }

    if (line.size() > 8) throw Error(ErrorKind::Syntax, fmt::format("'{}' is wider than one word", line), line_no);
    image.words.push_back(static_cast<Word>(parse_hex_field(line, line_no)));
    have_base = true;
    ++next_word;
  }
  return image;
}

std::string format_hex_image(const MemoryImage& image) {
  std::string out;
  out.reserve(image.words.size() * 9 + 10);
  if (image.base_address != 0) out += fmt::format("@{:08x}\n", image.base_address / 4);
  for (Word w : image.words) out += fmt::format("{:08x}\n", w);
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, fmt::format("cannot write '{}'", path.string()));
  out << text;
}

MemoryImage read_hex_file(const std::filesystem::path& path) { return parse_hex_image(read_text_file(path)); }

void write_hex_file(const std::filesystem::path& path, const MemoryImage& image) {
  write_text_file(path, format_hex_image(image));
}

}  // namespace biorv
