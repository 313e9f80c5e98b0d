#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "biorv/isa.hpp"

namespace biorv {

enum class DeviceKind { Pacing, Sensing, Egm, Telemetry, Battery };

std::string_view to_string(DeviceKind kind);
std::optional<DeviceKind> parse_device_kind(std::string_view name);

// Register offsets inside every stub device. Offsets past Data are unmapped.
enum class DeviceReg : Addr { Control = 0x0, Status = 0x4, Data = 0x8 };

struct AccessRecord {
  std::uint64_t cycle;
  Addr addr;
  bool write;
  Word value;

  friend bool operator==(const AccessRecord&, const AccessRecord&) = default;
};

struct Peripheral {
  DeviceKind kind;
  Addr base;
  Addr span;
  std::array<Word, 3> registers{};
  std::vector<AccessRecord> event_log;

  bool contains(Addr addr) const { return addr >= base && addr - base < span; }
  Word reg(DeviceReg r) const { return registers[static_cast<Addr>(r) / 4]; }
};

struct MmioAccess {
  bool write = false;
  Word value = 0;

  static MmioAccess read() { return {}; }
  static MmioAccess store(Word v) { return {true, v}; }
};

// Stub MMIO devices placed outside the unified memory. Each device exposes a
// control, status and data word; every access is logged with its cycle stamp.
class PeripheralMap {
 public:
  static constexpr Addr kDefaultSpan = 16;

  explicit PeripheralMap(std::size_t memory_size_bytes) : memory_size_(memory_size_bytes) {}

  // pacing, sensing, egm, telemetry, battery packed directly above memory.
  static PeripheralMap default_map(std::size_t memory_size_bytes);

  // Text form: one `<name> <base> [span]` per line, numbers decimal or 0x-hex,
  // `#` comments.
  static PeripheralMap parse(std::string_view text, std::size_t memory_size_bytes);

  // Throws InvalidArgument on overlap with memory or another device.
  Peripheral& add(DeviceKind kind, Addr base, Addr span = kDefaultSpan);

  bool maps(Addr addr) const { return find(addr) != nullptr; }

  // Returns the register value for reads and the stored value for writes.
  // Throws UnmappedAddress outside every device register, MisalignedAccess for
  // unaligned addresses.
  Word dispatch(Addr addr, MmioAccess access, std::uint64_t cycle);

  // Host-side register poke/peek; not logged.
  void set_register(DeviceKind kind, DeviceReg reg, Word value);
  Word get_register(DeviceKind kind, DeviceReg reg) const;

  const Peripheral& device(DeviceKind kind) const;
  const std::vector<Peripheral>& devices() const { return devices_; }
  std::size_t memory_size() const { return memory_size_; }

 private:
  const Peripheral* find(Addr addr) const;
  Peripheral* find(Addr addr);
  Peripheral& device_mut(DeviceKind kind);

  std::size_t memory_size_;
  std::vector<Peripheral> devices_;
};

}  // namespace biorv
