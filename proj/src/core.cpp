#include "biorv/core.hpp"

#include <fmt/format.h>

#include "biorv/error.hpp"

namespace biorv {

std::string_view to_string(FsmState s) {
  switch (s) {
    case FsmState::Fetch: return "Fetch";
    case FsmState::Decode: return "Decode";
    case FsmState::Execute: return "Execute";
    case FsmState::AluWriteback: return "AluWriteback";
    case FsmState::MemAddr: return "MemAddr";
    case FsmState::MemRead: return "MemRead";
    case FsmState::LoadWriteback: return "LoadWriteback";
    case FsmState::MemWrite: return "MemWrite";
    case FsmState::BranchCompletion: return "BranchCompletion";
    case FsmState::JumpLink: return "JumpLink";
  }
  return "?";
}

std::string format_trace(const TraceRecord& rec) {
  std::string disasm;
  if (rec.state) {
    auto d = try_decode(rec.ir);
    disasm = d ? format_instruction(*d) : fmt::format(".word 0x{:08X}", rec.ir);
  }
  return fmt::format("{},{},{},0x{:08x},0x{:08x},\"{}\",{}", rec.cycle, to_string(rec.mode),
                     rec.state ? to_string(*rec.state) : std::string_view{"held"}, rec.pc, rec.ir, disasm,
                     rec.retired ? 1 : 0);
}

void apply_control(CoreState& core, bool ie, bool reset, bool write_enable) {
  core.mode = mode_from_lines(ie, reset, write_enable);
  if (core.mode != ControlMode::ResetHold) return;
  core.pc = 0;
  core.instr_pc = 0;
  core.fsm = FsmState::Fetch;
  core.ir = 0;
  core.decoded.reset();
  core.a = core.b = core.alu_out = core.mdr = 0;
  core.cycle_count = 0;
  core.retired_count = 0;
  core.retired_by_class = {};
  core.held_cycles = 0;
}

namespace {

Word alu(Op op, Word lhs, Word rhs) {
  const unsigned shamt = rhs & 31u;
  switch (op) {
    case Op::Add:
    case Op::Addi: return lhs + rhs;
    case Op::Sub: return lhs - rhs;
    case Op::Sll:
    case Op::Slli: return lhs << shamt;
    case Op::Slt:
    case Op::Slti: return static_cast<std::int32_t>(lhs) < static_cast<std::int32_t>(rhs) ? 1 : 0;
    case Op::Sltu:
    case Op::Sltiu: return lhs < rhs ? 1 : 0;
    case Op::Xor:
    case Op::Xori: return lhs ^ rhs;
    case Op::Srl:
    case Op::Srli: return lhs >> shamt;
    case Op::Sra:
    case Op::Srai: return static_cast<Word>(static_cast<std::int32_t>(lhs) >> shamt);
    case Op::Or:
    case Op::Ori: return lhs | rhs;
    case Op::And:
    case Op::Andi: return lhs & rhs;
    default: break;
  }
  throw Error(ErrorKind::InvalidArgument, fmt::format("{} is not an ALU operation", mnemonic(op)));
}

Word data_read(Bus bus, Addr addr, std::uint64_t tick) {
  if (!bus.memory.contains(addr) && bus.mmio && bus.mmio->maps(addr)) {
    return bus.mmio->dispatch(addr, MmioAccess::read(), tick);
  }
  return bus.memory.read_word(addr);
}

void data_write(Bus bus, Addr addr, Word value, ControlMode mode, std::uint64_t tick) {
  if (!bus.memory.contains(addr) && bus.mmio && bus.mmio->maps(addr)) {
    bus.mmio->dispatch(addr, MmioAccess::store(value), tick);
    return;
  }
  bus.memory.schedule_write(addr, value, mode, WritePort::Core);
}

void check_target(Addr target) {
  if (target % 4 != 0) {
    throw Error(ErrorKind::MisalignedAccess, fmt::format("control transfer to unaligned 0x{:08X}", target));
  }
}

// Performs the work of core.fsm and returns the next state; sets `retired`
// when this was the instruction's final state.
FsmState execute_state(CoreState& core, Bus bus, bool& retired) {
  switch (core.fsm) {
    case FsmState::Fetch:
      core.instr_pc = core.pc;
      core.ir = bus.memory.read_word(core.pc);
      core.pc += 4;
      return FsmState::Decode;

    case FsmState::Decode: {
      const DecodedInstruction d = decode(core.ir);
      core.decoded = d;
      core.a = core.regfile.read(d.rs1);
      core.b = core.regfile.read(d.rs2);
      switch (d.instr_class()) {
        case InstrClass::RTypeAlu:
        case InstrClass::ITypeAlu: return FsmState::Execute;
        case InstrClass::Load:
        case InstrClass::Store: return FsmState::MemAddr;
        case InstrClass::Branch: return FsmState::BranchCompletion;
        case InstrClass::Jump: return FsmState::JumpLink;
      }
      break;
    }

    case FsmState::Execute: {
      const DecodedInstruction& d = *core.decoded;
      const Word rhs = d.instr_class() == InstrClass::RTypeAlu ? core.b : static_cast<Word>(d.imm);
      core.alu_out = alu(d.op, core.a, rhs);
      return FsmState::AluWriteback;
    }

    case FsmState::AluWriteback:
      core.regfile.write(core.decoded->rd, core.alu_out);
      retired = true;
      return FsmState::Fetch;

    case FsmState::MemAddr:
      core.alu_out = core.a + static_cast<Word>(core.decoded->imm);
      return core.decoded->instr_class() == InstrClass::Load ? FsmState::MemRead : FsmState::MemWrite;

    case FsmState::MemRead:
      core.mdr = data_read(bus, core.alu_out, core.tick);
      return FsmState::LoadWriteback;

    case FsmState::LoadWriteback:
      core.regfile.write(core.decoded->rd, core.mdr);
      retired = true;
      return FsmState::Fetch;

    case FsmState::MemWrite:
      data_write(bus, core.alu_out, core.b, core.mode, core.tick);
      retired = true;
      return FsmState::Fetch;

    case FsmState::BranchCompletion:
      if (core.a == core.b) {
        const Addr target = core.instr_pc + static_cast<Word>(core.decoded->imm);
        check_target(target);
        core.pc = target;
      }
      retired = true;
      return FsmState::Fetch;

    case FsmState::JumpLink: {
      const Addr target = core.instr_pc + static_cast<Word>(core.decoded->imm);
      check_target(target);
      core.alu_out = core.instr_pc + 4;
      core.pc = target;
      return FsmState::AluWriteback;
    }
  }
  throw Error(ErrorKind::InvalidArgument, "corrupt FSM state");
}

}  // namespace

TraceRecord step_cycle(CoreState& core, Bus bus) {
  const std::uint64_t tick = core.tick;
  if (core.mode != ControlMode::Executing) {
    bus.memory.commit_cycle();
    ++core.held_cycles;
    ++core.tick;
    return TraceRecord{tick, core.mode, std::nullopt, core.pc, core.ir, false};
  }

  const FsmState state = core.fsm;
  bool retired = false;
  FsmState next;
  try {
    next = execute_state(core, bus, retired);
  } catch (const Error& e) {
    throw Error(e.kind(), fmt::format("{} [pc=0x{:08X} state={}]", e.message(), core.instr_pc, to_string(state)));
  }
  bus.memory.commit_cycle();
  core.fsm = next;
  ++core.cycle_count;
  ++core.tick;
  if (retired) {
    ++core.retired_count;
    ++core.retired_by_class[class_index(core.decoded->instr_class())];
  }
  return TraceRecord{tick, core.mode, state, core.instr_pc, core.ir, retired};
}

StepResult step_instruction(CoreState& core, Bus bus) {
  if (core.mode != ControlMode::Executing) {
    throw Error(ErrorKind::NotExecuting, fmt::format("core is in {} mode", to_string(core.mode)));
  }
  int cycles = 0;
  for (;;) {
    const TraceRecord rec = step_cycle(core, bus);
    ++cycles;
    if (rec.retired) return {*core.decoded, cycles};
  }
}

RunReport run(CoreState& core, Bus bus, std::uint64_t max_cycles, HaltPolicy halt, const EnergyModel& model,
              const TraceSink& trace) {
  if (max_cycles == 0) throw Error(ErrorKind::InvalidArgument, "max_cycles must be positive");
  if (core.mode != ControlMode::Executing) {
    throw Error(ErrorKind::NotExecuting, fmt::format("core is in {} mode", to_string(core.mode)));
  }
  model.validate();

  const std::uint64_t start_cycles = core.cycle_count;
  const ClassCounts start_retired = core.retired_by_class;

  RunReport report;
  report.halt_reason = HaltReason::BudgetExhausted;
  while (core.cycle_count - start_cycles < max_cycles) {
    TraceRecord rec;
    try {
      rec = step_cycle(core, bus);
    } catch (const Error& e) {
      report.halt_reason = HaltReason::Fault;
      report.fault = Fault{e.kind(), e.message()};
      break;
    }
    if (trace) trace(rec);
    if (rec.retired && halt.self_loop) {
      const InstrClass c = core.decoded->instr_class();
      if ((c == InstrClass::Jump || c == InstrClass::Branch) && core.pc == core.instr_pc) {
        report.halt_reason = HaltReason::SelfLoop;
        break;
      }
    }
  }

  report.total_cycles = core.cycle_count - start_cycles;
  for (std::size_t i = 0; i < kClassCount; ++i) report.retired[i] = core.retired_by_class[i] - start_retired[i];
  report.final_state = core;
  annotate(report, model);
  return report;
}

}  // namespace biorv
