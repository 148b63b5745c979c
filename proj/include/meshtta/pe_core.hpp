#pragma once

// Bit-exact semantics of one PE. Timing contract for a single cycle:
//   1. the guard is evaluated against the boolean registers at cycle start;
//      a false guard squashes the move (only pc advances),
//   2. the source is read (immediate, GPR, BOOL as 0/1, or an FU output
//      latch as of cycle start),
//   3. the destination is written; a trigger destination executes its FU this
//      cycle and the result is visible on the output latch from the next
//      cycle on. GCU.pc sets the next pc (no delay slot), GCU.halt halts the
//      PE after this cycle. write_shared lands in the pending slot and is
//      committed to shared_current at the array's end-of-cycle barrier.
// Output latches hold their value until the next trigger overwrites them.

#include <cstdint>
#include <optional>

#include "meshtta/isa.hpp"
#include "meshtta/plane.hpp"

namespace meshtta {

// Eight neighbor shared-register values in direction order (0=N ... 7=NW).
struct NeighborView {
  word_t values[8] = {0, 0, 0, 0, 0, 0, 0, 0};
};

struct PEState {
  word_t gpr[8] = {};
  bool boolreg[2] = {};
  word_t alu_out = 0;
  word_t logic_out = 0;
  word_t nfu_out = 0;
  word_t alu_in2 = 0;
  word_t logic_in2 = 0;
  word_t shared_current = 0;
  word_t shared_pending = 0;
  bool shared_dirty = false;  // pending write awaiting the end-of-cycle commit
  std::uint32_t pc = 0;
  bool halted = false;
  std::uint16_t x = 0;
  std::uint16_t y = 0;

  bool operator==(const PEState&) const = default;
};

// add -> (trig + in2) mod 2^16; eq/gtu -> 0 or 1 (gtu is trig > in2, unsigned).
word_t alu_exec(AluOp op, word_t trig_operand, word_t in2);

// and/or/xor are bitwise; shr/shl shift the in2 data by (trig mod 16).
word_t logic_exec(LogicOp op, word_t trig_operand, word_t in2);

// Operands are masked, not trapped: direction mod 8, index axis mod 2.
struct NfuResult {
  std::optional<word_t> nfu_out;
  std::optional<word_t> pending_shared;
};
NfuResult nfu_exec(NfuOp op, word_t operand, const NeighborView& view, word_t x, word_t y);

bool guard_passes(Guard g, const bool boolreg[2]);

struct MoveOutcome {
  bool executed = false;
  word_t bus_value = 0;
};

// One cycle of one non-halted PE; pure transition over the snapshotted
// neighbor view. Deterministic: identical inputs give identical results.
PEState pe_step(const PEState& state, const Move& instr, const NeighborView& view,
                MoveOutcome* outcome = nullptr);

} // namespace meshtta
