#include "biorv/peripherals.hpp"

#include <fmt/format.h>

#include <charconv>

#include "biorv/error.hpp"

namespace biorv {

namespace {

constexpr std::array<DeviceKind, 5> kAllDevices = {DeviceKind::Pacing, DeviceKind::Sensing, DeviceKind::Egm,
                                                   DeviceKind::Telemetry, DeviceKind::Battery};

std::uint64_t parse_number(std::string_view tok, int line) {
  int base = 10;
  if (tok.starts_with("0x") || tok.starts_with("0X")) {
    tok.remove_prefix(2);
    base = 16;
  }
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v, base);
  if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size() || v > 0xFFFFFFFFu) {
    throw Error(ErrorKind::Syntax, fmt::format("bad number '{}'", tok), line);
  }
  return v;
}

}  // namespace

std::string_view to_string(DeviceKind kind) {
  switch (kind) {
    case DeviceKind::Pacing: return "pacing";
    case DeviceKind::Sensing: return "sensing";
    case DeviceKind::Egm: return "egm";
    case DeviceKind::Telemetry: return "telemetry";
    case DeviceKind::Battery: return "battery";
  }
  return "?";
}

std::optional<DeviceKind> parse_device_kind(std::string_view name) {
  for (DeviceKind k : kAllDevices) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

PeripheralMap PeripheralMap::default_map(std::size_t memory_size_bytes) {
  PeripheralMap map(memory_size_bytes);
  auto base = static_cast<Addr>(memory_size_bytes);
  for (DeviceKind k : kAllDevices) {
    map.add(k, base);
    base += kDefaultSpan;
  }
  return map;
}

PeripheralMap PeripheralMap::parse(std::string_view text, std::size_t memory_size_bytes) {
  PeripheralMap map(memory_size_bytes);
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = line.substr(0, line.find('#'));

    std::vector<std::string_view> toks;
    std::size_t pos = 0;
    while (pos < line.size()) {
      const auto start = line.find_first_not_of(" \t\r", pos);
      if (start == std::string_view::npos) break;
      const auto end = line.find_first_of(" \t\r", start);
      toks.push_back(line.substr(start, end == std::string_view::npos ? line.size() - start : end - start));
      pos = end == std::string_view::npos ? line.size() : end;
    }
    if (toks.empty()) continue;
    if (toks.size() < 2 || toks.size() > 3) {
      throw Error(ErrorKind::Syntax, "expected '<device> <base> [span]'", line_no);
    }
    auto kind = parse_device_kind(toks[0]);
    if (!kind) throw Error(ErrorKind::Syntax, fmt::format("unknown device '{}'", toks[0]), line_no);
    const auto base = static_cast<Addr>(parse_number(toks[1], line_no));
    const auto span = toks.size() == 3 ? static_cast<Addr>(parse_number(toks[2], line_no)) : kDefaultSpan;
    try {
      map.add(*kind, base, span);
    } catch (const Error& e) {
      throw Error(e.kind(), e.message(), line_no);
    }
  }
  return map;
}

Peripheral& PeripheralMap::add(DeviceKind kind, Addr base, Addr span) {
  if (span < 12 || span % 4 != 0 || base % 4 != 0) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("{}: base must be word-aligned and span a multiple of 4 >= 12", to_string(kind)));
  }
  const std::uint64_t end = std::uint64_t{base} + span;
  if (end > 0x1'0000'0000ull) throw Error(ErrorKind::InvalidArgument, "device range wraps the address space");
  if (base < memory_size_) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("{} at 0x{:08X} overlaps {}-byte memory", to_string(kind), base, memory_size_));
  }
  for (const auto& d : devices_) {
    if (d.kind == kind) throw Error(ErrorKind::InvalidArgument, fmt::format("duplicate device {}", to_string(kind)));
    if (base < std::uint64_t{d.base} + d.span && d.base < end) {
      throw Error(ErrorKind::InvalidArgument,
                  fmt::format("{} overlaps {}", to_string(kind), to_string(d.kind)));
    }
  }
  devices_.push_back(Peripheral{kind, base, span, {}, {}});
  return devices_.back();
}

const Peripheral* PeripheralMap::find(Addr addr) const {
  for (const auto& d : devices_) {
    if (d.contains(addr)) return &d;
  }
  return nullptr;
}

Peripheral* PeripheralMap::find(Addr addr) {
  return const_cast<Peripheral*>(static_cast<const PeripheralMap*>(this)->find(addr));
}

Word PeripheralMap::dispatch(Addr addr, MmioAccess access, std::uint64_t cycle) {
  Peripheral* dev = find(addr);
  if (!dev) throw Error(ErrorKind::UnmappedAddress, fmt::format("no device at 0x{:08X}", addr));
  if (addr % 4 != 0) throw Error(ErrorKind::MisalignedAccess, fmt::format("address 0x{:08X} is not word-aligned", addr));
  const Addr index = (addr - dev->base) / 4;
  if (index >= dev->registers.size()) {
    throw Error(ErrorKind::UnmappedAddress,
                fmt::format("0x{:08X} is in {} but past its registers", addr, to_string(dev->kind)));
  }
  if (access.write) dev->registers[index] = access.value;
  const Word value = dev->registers[index];
  dev->event_log.push_back(AccessRecord{cycle, addr, access.write, value});
  return value;
}

Peripheral& PeripheralMap::device_mut(DeviceKind kind) {
  for (auto& d : devices_) {
    if (d.kind == kind) return d;
  }
  throw Error(ErrorKind::InvalidArgument, fmt::format("device {} not mapped", to_string(kind)));
}

const Peripheral& PeripheralMap::device(DeviceKind kind) const {
  return const_cast<PeripheralMap*>(this)->device_mut(kind);
}

void PeripheralMap::set_register(DeviceKind kind, DeviceReg reg, Word value) {
  device_mut(kind).registers[static_cast<Addr>(reg) / 4] = value;
}

Word PeripheralMap::get_register(DeviceKind kind, DeviceReg reg) const { return device(kind).reg(reg); }

}  // namespace biorv
