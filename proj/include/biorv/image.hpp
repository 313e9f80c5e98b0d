#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "biorv/isa.hpp"

namespace biorv {

// A contiguous run of words starting at a word-aligned byte address.
struct MemoryImage {
  Addr base_address = 0;
  std::vector<Word> words;

  Addr end_address() const { return base_address + static_cast<Addr>(words.size() * 4); }

  friend bool operator==(const MemoryImage&, const MemoryImage&) = default;
};

// Hex image text: one 8-digit hex word per line, optionally preceded by
// `@HEXADDR` records giving a *word* address (readmemh style). Blank lines and
// `//` or `#` comments are ignored. A later `@` record may skip forward; the
// gap is zero-filled. Backward records are rejected.
MemoryImage parse_hex_image(std::string_view text);

// Inverse of parse_hex_image. Emits an `@` record only when base_address != 0.
std::string format_hex_image(const MemoryImage& image);

MemoryImage read_hex_file(const std::filesystem::path& path);
void write_hex_file(const std::filesystem::path& path, const MemoryImage& image);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace biorv
