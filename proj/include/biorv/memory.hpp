#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "biorv/control_mode.hpp"
#include "biorv/image.hpp"
#include "biorv/isa.hpp"

namespace biorv {

// Which side of the single write port a write arrives on: the external
// WriteData interface, or the core's own MemWrite state.
enum class WritePort { External, Core };

struct PendingWrite {
  Addr addr;
  Word value;

  friend bool operator==(const PendingWrite&, const PendingWrite&) = default;
};

// Single shared instruction/data memory. Reads are combinational and see only
// committed contents; writes are registered and land at the next
// commit_cycle(). Zero-initialized.
class UnifiedMemory {
 public:
  static constexpr std::size_t kDefaultSizeBytes = 4096;

  explicit UnifiedMemory(std::size_t size_bytes = kDefaultSizeBytes);

  std::size_t size_bytes() const { return words_.size() * 4; }
  bool contains(Addr addr) const { return addr < size_bytes(); }

  Word read_word(Addr addr) const;

  // External writes are accepted only in Programming mode; core writes only
  // while Executing. At most one write per cycle.
  void schedule_write(Addr addr, Word value, ControlMode mode, WritePort port = WritePort::External);
  void commit_cycle();

  // One external write plus commit per word. Returns the number of words written.
  std::size_t load_image(const MemoryImage& image, ControlMode mode);

  // Words [addr, addr + len_bytes) without any mode checks; len_bytes must be a
  // multiple of 4.
  MemoryImage snapshot(Addr addr, std::size_t len_bytes) const;
  MemoryImage dump() const { return snapshot(0, size_bytes()); }

  std::span<const Word> words() const { return words_; }
  const std::optional<PendingWrite>& pending_write() const { return pending_; }

  friend bool operator==(const UnifiedMemory&, const UnifiedMemory&) = default;

 private:
  void check_access(Addr addr) const;

  std::vector<Word> words_;
  std::optional<PendingWrite> pending_;
};

}  // namespace biorv
