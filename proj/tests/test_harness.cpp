#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "biorv/assembler.hpp"
#include "biorv/error.hpp"
#include "biorv/harness.hpp"
#include "biorv/reference.hpp"

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

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "biorv_harness_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("program_and_start leaves the core executing from pc 0") {
  Simulator sim;
  const MemoryImage img = assemble("addi x1, x0, 5\nh: jal x0, h");
  program_and_start(sim, img);
  CHECK(sim.core.mode == ControlMode::Executing);
  CHECK(sim.core.pc == 0);
  CHECK(sim.core.fsm == FsmState::Fetch);
  const RunReport r = run(sim.core, sim.bus(), 1000);
  CHECK(r.final_state.regfile.read(1) == 5);
  CHECK(r.final_state.regfile == reference_execute(img, 0, 100).regfile);
}

TEST_CASE("program_and_start twice restarts with the new image") {
  Simulator sim;
  program_and_start(sim, assemble("addi x1, x0, 1\nh: jal x0, h"));
  run(sim.core, sim.bus(), 1000);
  program_and_start(sim, assemble("addi x2, x0, 2\nh: jal x0, h"));
  CHECK(sim.core.pc == 0);
  CHECK(sim.memory.read_word(0) == encode({Op::Addi, 2, 0, 0, 2}));
  const RunReport r = run(sim.core, sim.bus(), 1000);
  CHECK(r.halt_reason == HaltReason::SelfLoop);
  CHECK(r.final_state.regfile.read(2) == 2);
  CHECK(r.total_cycles == 8);
}

TEST_CASE("empty image faults immediately on the zero word") {
  Simulator sim;
  program_and_start(sim, MemoryImage{});
  const RunReport r = run(sim.core, sim.bus(), 1000);
  CHECK(r.halt_reason == HaltReason::Fault);
  CHECK(r.fault->kind == ErrorKind::UnsupportedInstruction);
  CHECK(r.fault->message.find("pc=0x00000000") != std::string::npos);
  CHECK(r.retired_total() == 0);
}

TEST_CASE("failed load leaves the simulator in observation mode") {
  Simulator sim(64);
  CHECK(kind_of([&] { program_and_start(sim, MemoryImage{0, std::vector<Word>(17, 1)}); }) == ErrorKind::OutOfRange);
  CHECK(sim.core.mode == ControlMode::Observation);
}

TEST_CASE("observe") {
  Simulator sim;
  const MemoryImage img = assemble("addi x1, x0, 5\nh: jal x0, h");

  SUBCASE("after load, before start") {
    apply_control(sim.core, false, false, true);
    sim.memory.load_image(img, sim.core.mode);
    const UnifiedMemory before = sim.memory;
    const Observation o = observe(sim, 0, 8);
    CHECK(o.words.words == img.words);
    CHECK_FALSE(o.stopped_execution);
    CHECK(sim.core.mode == ControlMode::Programming);
    CHECK(sim.memory == before);
  }
  SUBCASE("while executing: stops and stays stopped") {
    program_and_start(sim, img);
    step_cycle(sim.core, sim.bus());
    const Observation o = observe(sim, 0, 8);
    CHECK(o.stopped_execution);
    CHECK(sim.core.mode == ControlMode::Observation);
    const CoreState frozen = sim.core;
    step_cycle(sim.core, sim.bus());
    CHECK(sim.core.pc == frozen.pc);
    CHECK(sim.core.fsm == frozen.fsm);
  }
  SUBCASE("errors") {
    CHECK(kind_of([&] { observe(sim, 4092, 8); }) == ErrorKind::OutOfRange);
    CHECK(kind_of([&] { observe(sim, 2, 4); }) == ErrorKind::MisalignedAccess);
  }
}

TEST_CASE("peripheral map layout and dispatch") {
  PeripheralMap map = PeripheralMap::default_map(4096);
  REQUIRE(map.devices().size() == 5);
  CHECK(map.device(DeviceKind::Pacing).base == 0x1000);
  CHECK(map.device(DeviceKind::Battery).base == 0x1040);

  CHECK(mmio_dispatch(map, 0x1018, MmioAccess::store(42), 7) == 42);
  CHECK(mmio_dispatch(map, 0x1018, MmioAccess::read(), 9) == 42);
  const auto& log = map.device(DeviceKind::Sensing).event_log;
  REQUIRE(log.size() == 2);
  CHECK(log[0] == AccessRecord{7, 0x1018, true, 42});
  CHECK(log[1] == AccessRecord{9, 0x1018, false, 42});

  CHECK(kind_of([&] { map.dispatch(0x1050, MmioAccess::read(), 0); }) == ErrorKind::UnmappedAddress);
  CHECK(kind_of([&] { map.dispatch(0x100C, MmioAccess::read(), 0); }) == ErrorKind::UnmappedAddress);
  CHECK(kind_of([&] { map.dispatch(0x1001, MmioAccess::read(), 0); }) == ErrorKind::MisalignedAccess);
}

TEST_CASE("custom peripheral maps must be disjoint") {
  PeripheralMap map(4096);
  map.add(DeviceKind::Pacing, 0x2000);
  map.add(DeviceKind::Sensing, 0x2100);
  CHECK(kind_of([&] { map.dispatch(0x2050, MmioAccess::read(), 0); }) == ErrorKind::UnmappedAddress);
  CHECK(kind_of([&] { map.add(DeviceKind::Egm, 0x2008); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { map.add(DeviceKind::Egm, 0x0FF0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { map.add(DeviceKind::Pacing, 0x3000); }) == ErrorKind::InvalidArgument);

  const PeripheralMap parsed = PeripheralMap::parse("# custom\npacing 0x2000\nsensing 8448 32\n", 4096);
  CHECK(parsed.device(DeviceKind::Sensing).base == 0x2100);
  CHECK(parsed.device(DeviceKind::Sensing).span == 32);
  try {
    PeripheralMap::parse("pacing 0x2000\nradio 0x3000\n", 4096);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("pacemaker loop: one pacing log entry per paced beat") {
  Simulator sim;
  std::ifstream in(std::string(BIORV_PROGRAMS_DIR) + "/pacemaker.s");
  std::stringstream ss;
  ss << in.rdbuf();
  const MemoryImage img = assemble(ss.str());
  const UnifiedMemory untouched = [&] {
    UnifiedMemory m;
    m.load_image(img, ControlMode::Programming);
    return m;
  }();

  SUBCASE("nothing sensed: pace every beat") {
    program_and_start(sim, img);
    const RunReport r = run(sim.core, sim.bus(), 100'000);
    REQUIRE(r.halt_reason == HaltReason::SelfLoop);
    const auto& pacing = sim.mmio.device(DeviceKind::Pacing).event_log;
    CHECK(pacing.size() == 10);
    CHECK(pacing.size() + sim.mmio.device(DeviceKind::Telemetry).event_log.size() == r.retired_of(InstrClass::Store));
    for (std::size_t i = 1; i < pacing.size(); ++i) CHECK(pacing[i].cycle > pacing[i - 1].cycle);
    for (std::size_t i = 0; i < pacing.size(); ++i) CHECK(pacing[i].value == i);
    CHECK(sim.mmio.get_register(DeviceKind::Telemetry, DeviceReg::Data) == 10);
    CHECK(sim.mmio.device(DeviceKind::Sensing).event_log.size() == 10);
    CHECK(sim.memory == untouched);
  }
  SUBCASE("intrinsic beats sensed: no pacing") {
    sim.mmio.set_register(DeviceKind::Sensing, DeviceReg::Data, 1);
    program_and_start(sim, img);
    const RunReport r = run(sim.core, sim.bus(), 100'000);
    REQUIRE(r.halt_reason == HaltReason::SelfLoop);
    CHECK(sim.mmio.device(DeviceKind::Pacing).event_log.empty());
    CHECK(sim.mmio.get_register(DeviceKind::Telemetry, DeviceReg::Data) == 0);
  }
}

TEST_CASE("run_cycles holds when not executing") {
  Simulator sim;
  const RunReport r = run_cycles(sim, 25);
  CHECK(r.halt_reason == HaltReason::Held);
  CHECK(r.held_cycles == 25);
  CHECK(r.total_cycles == 0);
  CHECK(r.retired_total() == 0);
}

TEST_CASE("bring-up script parsing and validation") {
  const auto dir = temp_dir();
  write_hex_file(dir / "demo.hex", assemble("addi x1, x0, 5\nh: jal x0, h"));

  const BringUpScript s = parse_script("load demo.hex\nreset # pulse\n\nstart\nrun 100\nobserve 0x0 8\nstop\n", dir);
  REQUIRE(s.steps.size() == 6);
  CHECK(std::holds_alternative<step::LoadImage>(s.steps[0].action));
  CHECK(std::get<step::Observe>(s.steps[4].action).len_bytes == 8);
  CHECK(s.steps[2].line == 4);
  CHECK_NOTHROW(s.validate());

  const BringUpScript bad = parse_script("load demo.hex\nstart\n", dir);
  try {
    bad.validate();
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Script);
    CHECK(e.line() == 2);
  }
  CHECK(kind_of([&] { parse_script("jump 4\n", dir); }) == ErrorKind::Script);
  CHECK(kind_of([&] { parse_script("run\n", dir); }) == ErrorKind::Script);
  CHECK(kind_of([&] { parse_script("run 0\n", dir); }) == ErrorKind::Script);
  CHECK(kind_of([&] { parse_script("load missing.hex\n", dir); }) == ErrorKind::Io);
}

TEST_CASE("bring-up script execution") {
  const auto dir = temp_dir();
  write_hex_file(dir / "demo.hex", assemble("addi x1, x0, 5\nh: jal x0, h"));
  Simulator sim;
  std::ostringstream out;
  const auto script = parse_script("load demo.hex\nobserve 0 8\nrun 5\nreset\nstart\nrun 100\nobserve 0 8\n", dir);
  const ScriptResult res = run_script(sim, script, out);
  REQUIRE(res.reports.size() == 2);
  CHECK(res.reports[0].halt_reason == HaltReason::Held);
  CHECK(res.reports[0].retired_total() == 0);
  CHECK(res.reports[1].halt_reason == HaltReason::SelfLoop);
  CHECK(res.reports[1].final_state.regfile.read(1) == 5);
  REQUIRE(res.observations.size() == 2);
  CHECK(res.observations[0].words.words == std::vector<Word>{0x00500093, 0x0000006F});
  CHECK(res.observations[1].stopped_execution);
  CHECK(out.str().find("@00000000\n00500093\n0000006f\n") != std::string::npos);

  SUBCASE("load while executing is rejected") {
    Simulator s2;
    std::ostringstream o2;
    const auto sc = parse_script("reset\nstart\nload demo.hex\n", dir);
    try {
      run_script(s2, sc, o2);
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::WriteForbiddenInMode);
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("faulting run stops the script") {
    write_hex_file(dir / "bad.hex", MemoryImage{0, {0xFFFFFFFF}});
    Simulator s3;
    std::ostringstream o3;
    const auto sc = parse_script("load bad.hex\nreset\nstart\nrun 10\nrun 10\n", dir);
    const ScriptResult r3 = run_script(s3, sc, o3);
    CHECK(r3.faulted);
    CHECK(r3.reports.size() == 1);
  }
}
