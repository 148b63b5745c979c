#include "meshtta/pe_core.hpp"

#include <cassert>

namespace meshtta {

word_t alu_exec(AluOp op, word_t trig_operand, word_t in2) {
  switch (op) {
    case AluOp::Add:
      return static_cast<word_t>(trig_operand + in2);
    case AluOp::Eq:
      return trig_operand == in2 ? 1 : 0;
    case AluOp::Gtu:
      return trig_operand > in2 ? 1 : 0;
  }
  return 0;
}

word_t logic_exec(LogicOp op, word_t trig_operand, word_t in2) {
  switch (op) {
    case LogicOp::And:
      return trig_operand & in2;
    case LogicOp::Or:
      return trig_operand | in2;
    case LogicOp::Xor:
      return trig_operand ^ in2;
    case LogicOp::Shr:
      return static_cast<word_t>(in2 >> (trig_operand % 16));
    case LogicOp::Shl:
      return static_cast<word_t>(in2 << (trig_operand % 16));
  }
  return 0;
}

NfuResult nfu_exec(NfuOp op, word_t operand, const NeighborView& view, word_t x, word_t y) {
  switch (op) {
    case NfuOp::ReadNeighbour:
      return {view.values[operand % 8], std::nullopt};
    case NfuOp::ReadIndex:
      return {operand % 2 == 0 ? x : y, std::nullopt};
    case NfuOp::WriteShared:
      return {std::nullopt, operand};
  }
  return {};
}

bool guard_passes(Guard g, const bool boolreg[2]) {
  switch (g) {
    case Guard::Always: return true;
    case Guard::IfB0: return boolreg[0];
    case Guard::IfB1: return boolreg[1];
    case Guard::IfNotB0: return !boolreg[0];
    case Guard::IfNotB1: return !boolreg[1];
  }
  return false;
}

PEState pe_step(const PEState& state, const Move& instr, const NeighborView& view,
                MoveOutcome* outcome) {
  assert(!state.halted);
  PEState next = state;
  next.pc = state.pc + 1;

  if (!guard_passes(instr.guard, state.boolreg)) {
    if (outcome) *outcome = {false, 0};
    return next;
  }

  word_t value;
  if (instr.uses_immediate) {
    value = instr.immediate;
  } else {
    int id = static_cast<int>(instr.src);
    if (id < 8) value = state.gpr[id];
    else if (instr.src == Src::Bool0) value = state.boolreg[0] ? 1 : 0;
    else if (instr.src == Src::Bool1) value = state.boolreg[1] ? 1 : 0;
    else if (instr.src == Src::AluOut) value = state.alu_out;
    else if (instr.src == Src::LogicOut) value = state.logic_out;
    else value = state.nfu_out;
  }

  int dst = static_cast<int>(instr.dst);
  if (dst < 8) {
    next.gpr[dst] = value;
  } else {
    switch (instr.dst) {
      case Dst::Bool0: next.boolreg[0] = value != 0; break;
      case Dst::Bool1: next.boolreg[1] = value != 0; break;
      case Dst::AluIn2: next.alu_in2 = value; break;
      case Dst::AluTrigAdd: next.alu_out = alu_exec(AluOp::Add, value, state.alu_in2); break;
      case Dst::AluTrigEq: next.alu_out = alu_exec(AluOp::Eq, value, state.alu_in2); break;
      case Dst::AluTrigGtu: next.alu_out = alu_exec(AluOp::Gtu, value, state.alu_in2); break;
      case Dst::LogicIn2: next.logic_in2 = value; break;
      case Dst::LogicTrigAnd: next.logic_out = logic_exec(LogicOp::And, value, state.logic_in2); break;
      case Dst::LogicTrigOr: next.logic_out = logic_exec(LogicOp::Or, value, state.logic_in2); break;
      case Dst::LogicTrigXor: next.logic_out = logic_exec(LogicOp::Xor, value, state.logic_in2); break;
      case Dst::LogicTrigShr: next.logic_out = logic_exec(LogicOp::Shr, value, state.logic_in2); break;
      case Dst::LogicTrigShl: next.logic_out = logic_exec(LogicOp::Shl, value, state.logic_in2); break;
      case Dst::NfuTrigReadNeighbour:
      case Dst::NfuTrigReadIndex:
      case Dst::NfuTrigWriteShared: {
        NfuOp op = instr.dst == Dst::NfuTrigReadNeighbour ? NfuOp::ReadNeighbour
                   : instr.dst == Dst::NfuTrigReadIndex   ? NfuOp::ReadIndex
                                                          : NfuOp::WriteShared;
        NfuResult r = nfu_exec(op, value, view, state.x, state.y);
        if (r.nfu_out) next.nfu_out = *r.nfu_out;
        if (r.pending_shared) {
          next.shared_pending = *r.pending_shared;
          next.shared_dirty = true;
        }
        break;
      }
      case Dst::GcuPc: next.pc = value; break;
      case Dst::GcuHalt: next.halted = true; break;
      default: break;
    }
  }

  if (outcome) *outcome = {true, value};
  return next;
}

} // namespace meshtta
