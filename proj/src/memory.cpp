#include "biorv/memory.hpp"

#include <fmt/format.h>

#include "biorv/error.hpp"

namespace biorv {

UnifiedMemory::UnifiedMemory(std::size_t size_bytes) {
  if (size_bytes == 0 || size_bytes % 4 != 0) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("memory size {} must be a positive multiple of 4", size_bytes));
  }
  words_.assign(size_bytes / 4, 0);
}

void UnifiedMemory::check_access(Addr addr) const {
  if (addr % 4 != 0) throw Error(ErrorKind::MisalignedAccess, fmt::format("address 0x{:08X} is not word-aligned", addr));
  if (std::size_t{addr} + 4 > size_bytes()) {
    throw Error(ErrorKind::OutOfRange,
                fmt::format("address 0x{:08X} beyond {}-byte memory", addr, size_bytes()));
  }
}

Word UnifiedMemory::read_word(Addr addr) const {
  check_access(addr);
  return words_[addr / 4];
}

void UnifiedMemory::schedule_write(Addr addr, Word value, ControlMode mode, WritePort port) {
  const bool allowed = port == WritePort::External ? mode == ControlMode::Programming : mode == ControlMode::Executing;
  if (!allowed) {
    throw Error(ErrorKind::WriteForbiddenInMode,
                fmt::format("{} write to 0x{:08X} rejected in {} mode",
                            port == WritePort::External ? "external" : "core", addr, to_string(mode)));
  }
  check_access(addr);
  if (pending_) {
    throw Error(ErrorKind::DoubleWritePerCycle,
                fmt::format("write to 0x{:08X} while 0x{:08X} is still pending", addr, pending_->addr));
  }
  pending_ = PendingWrite{addr, value};
}

void UnifiedMemory::commit_cycle() {
  if (!pending_) return;
  words_[pending_->addr / 4] = pending_->value;
  pending_.reset();
}

std::size_t UnifiedMemory::load_image(const MemoryImage& image, ControlMode mode) {
  if (mode != ControlMode::Programming) {
    throw Error(ErrorKind::WriteForbiddenInMode,
                fmt::format("image load requires Programming mode, core is in {}", to_string(mode)));
  }
  if (image.base_address % 4 != 0) {
    throw Error(ErrorKind::MisalignedAccess, fmt::format("image base 0x{:08X} is not word-aligned", image.base_address));
  }
  if (std::size_t{image.base_address} + image.words.size() * 4 > size_bytes()) {
    throw Error(ErrorKind::OutOfRange, fmt::format("{}-word image at 0x{:08X} does not fit in {} bytes",
                                                   image.words.size(), image.base_address, size_bytes()));
  }
  Addr addr = image.base_address;
  for (Word w : image.words) {
    schedule_write(addr, w, mode, WritePort::External);
    commit_cycle();
    addr += 4;
  }
  return image.words.size();
}

MemoryImage UnifiedMemory::snapshot(Addr addr, std::size_t len_bytes) const {
  if (len_bytes % 4 != 0) throw Error(ErrorKind::MisalignedAccess, fmt::format("length {} is not a multiple of 4", len_bytes));
  if (addr % 4 != 0) throw Error(ErrorKind::MisalignedAccess, fmt::format("address 0x{:08X} is not word-aligned", addr));
  if (std::size_t{addr} + len_bytes > size_bytes()) {
    throw Error(ErrorKind::OutOfRange,
                fmt::format("range [0x{:08X}, +{}) beyond {}-byte memory", addr, len_bytes, size_bytes()));
  }
  MemoryImage out{addr, {}};
  out.words.assign(words_.begin() + addr / 4, words_.begin() + (addr + len_bytes) / 4);
  return out;
}

}  // namespace biorv
