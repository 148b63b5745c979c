#include <random>

#include "doctest.h"
#include "meshtta/pe_core.hpp"

using namespace meshtta;

TEST_CASE("alu semantics") {
  CHECK(alu_exec(AluOp::Add, 0xFFFF, 1) == 0);  // wraparound
  CHECK(alu_exec(AluOp::Add, 1200, 345) == 1545);
  CHECK(alu_exec(AluOp::Gtu, 3, 5) == 0);
  CHECK(alu_exec(AluOp::Gtu, 0xFFFF, 1) == 1);
  CHECK(alu_exec(AluOp::Gtu, 7, 7) == 0);  // strict
  CHECK(alu_exec(AluOp::Eq, 7, 7) == 1);
  CHECK(alu_exec(AluOp::Eq, 7, 8) == 0);
}

TEST_CASE("alu properties: wraparound add, 0/1 predicates") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> word(0, 0xFFFF);
  for (int i = 0; i < 2000; ++i) {
    word_t a = static_cast<word_t>(word(rng));
    word_t b = static_cast<word_t>(word(rng));
    CHECK(alu_exec(AluOp::Add, a, b) == static_cast<word_t>((a + b) % 65536));
    word_t eq = alu_exec(AluOp::Eq, a, b);
    word_t gt = alu_exec(AluOp::Gtu, a, b);
    CHECK((eq == 0 || eq == 1));
    CHECK((gt == 0 || gt == 1));
  }
}

TEST_CASE("logic semantics") {
  CHECK(logic_exec(LogicOp::Xor, 0xFFFF, 0x00F0) == 0xFF0F);
  CHECK(logic_exec(LogicOp::And, 0x0FF0, 0x00FF) == 0x00F0);
  CHECK(logic_exec(LogicOp::Or, 0x0F00, 0x00F0) == 0x0FF0);
  // data is in2, the trigger operand is the shift amount
  CHECK(logic_exec(LogicOp::Shl, 3, 1) == 8);
  CHECK(logic_exec(LogicOp::Shr, 4, 0x8000) == 0x0800);
  CHECK(logic_exec(LogicOp::Shr, 16, 0xABCD) == 0xABCD);  // amount mod 16
  CHECK(logic_exec(LogicOp::Shl, 15, 3) == 0x8000);       // truncated to 16 bits
}

TEST_CASE("nfu semantics") {
  NeighborView view;
  view.values[0] = 42;
  view.values[5] = 99;
  auto r = nfu_exec(NfuOp::ReadNeighbour, 0, view, 0, 0);
  CHECK(*r.nfu_out == 42);
  CHECK(!r.pending_shared);
  CHECK(*nfu_exec(NfuOp::ReadNeighbour, 5, view, 0, 0).nfu_out == 99);
  CHECK(*nfu_exec(NfuOp::ReadNeighbour, 8, view, 0, 0).nfu_out == 42);  // direction mod 8

  CHECK(*nfu_exec(NfuOp::ReadIndex, 0, view, 5, 9).nfu_out == 5);
  CHECK(*nfu_exec(NfuOp::ReadIndex, 1, view, 5, 9).nfu_out == 9);
  CHECK(*nfu_exec(NfuOp::ReadIndex, 3, view, 5, 9).nfu_out == 9);  // axis mod 2

  r = nfu_exec(NfuOp::WriteShared, 200, view, 0, 0);
  CHECK(!r.nfu_out);
  CHECK(*r.pending_shared == 200);
}

TEST_CASE("squashed guarded move changes only pc") {
  PEState s;
  s.gpr[0] = 5;
  s.gpr[1] = 1;
  s.boolreg[0] = false;
  NeighborView view;
  Move m = Move::reg(Guard::IfB0, Src::Gpr0, Dst::Gpr1);
  MoveOutcome outcome;
  PEState n = pe_step(s, m, view, &outcome);
  CHECK(!outcome.executed);
  CHECK(n.gpr[1] == 1);
  PEState expect = s;
  expect.pc = s.pc + 1;
  CHECK(n == expect);
}

TEST_CASE("squash property: random guarded moves against false guards") {
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> word(0, 0xFFFF);
  std::uniform_int_distribution<int> src(0, kSrcCount - 1);
  std::uniform_int_distribution<int> dst(0, kDstCount - 1);
  for (int i = 0; i < 500; ++i) {
    PEState s;
    for (auto& g : s.gpr) g = static_cast<word_t>(word(rng));
    s.alu_in2 = static_cast<word_t>(word(rng));
    s.alu_out = static_cast<word_t>(word(rng));
    s.boolreg[0] = (i % 2) == 0;
    s.boolreg[1] = (i % 3) == 0;
    Guard g = s.boolreg[0] ? Guard::IfNotB0 : Guard::IfB0;  // always false
    Move m = Move::reg(g, static_cast<Src>(src(rng)), static_cast<Dst>(dst(rng)));
    NeighborView view;
    PEState n = pe_step(s, m, view);
    PEState expect = s;
    expect.pc = s.pc + 1;
    CHECK(n == expect);
  }
}

TEST_CASE("trigger-then-read pipeline: gtu into a boolean") {
  // RF.6 -> ALU.in2 ; NFU_OUT -> ALU.trig.gtu ; ALU_OUT -> BOOL.0
  PEState s;
  s.gpr[6] = 10;
  s.nfu_out = 20;
  NeighborView view;
  s = pe_step(s, Move::reg(Src::Gpr6, Dst::AluIn2), view);
  CHECK(s.alu_in2 == 10);
  s = pe_step(s, Move::reg(Src::NfuOut, Dst::AluTrigGtu), view);
  CHECK(s.alu_out == alu_exec(AluOp::Gtu, 20, 10));  // cross-check against the FU oracle
  s = pe_step(s, Move::reg(Src::AluOut, Dst::Bool0), view);
  CHECK(s.boolreg[0]);
  CHECK(s.pc == 3);
}

TEST_CASE("fu results appear one cycle later, latches hold") {
  PEState s;
  s.alu_in2 = 7;
  s.alu_out = 111;
  NeighborView view;
  // the same move both reads ALU.out (old value) and triggers a new add
  MoveOutcome outcome;
  PEState n = pe_step(s, Move::reg(Src::AluOut, Dst::AluTrigAdd), view, &outcome);
  CHECK(outcome.bus_value == 111);      // source read at cycle start
  CHECK(n.alu_out == (111 + 7));        // result latched for the next cycle
  // an untriggered cycle leaves the latch alone
  PEState after = pe_step(n, Move::imm(3, Dst::Gpr0), view);
  CHECK(after.alu_out == n.alu_out);
}

TEST_CASE("jump and halt") {
  PEState s;
  s.pc = 3;
  NeighborView view;
  PEState n = pe_step(s, Move::imm(7, Dst::GcuPc), view);
  CHECK(n.pc == 7);  // no delay slot

  n = pe_step(s, Move::imm(0, Dst::GcuHalt), view);
  CHECK(n.halted);

  // bool stores value != 0; reading it back yields 0 or 1
  n = pe_step(s, Move::imm(200, Dst::Bool1), view);
  CHECK(n.boolreg[1]);
  PEState m = pe_step(n, Move::reg(Src::Bool1, Dst::Gpr4), view);
  CHECK(m.gpr[4] == 1);
}

TEST_CASE("write_shared is pending until the commit barrier") {
  PEState s;
  s.shared_current = 17;
  NeighborView view;
  PEState n = pe_step(s, Move::imm(200, Dst::NfuTrigWriteShared), view);
  CHECK(n.shared_current == 17);  // unchanged within the cycle
  CHECK(n.shared_pending == 200);
  CHECK(n.shared_dirty);
}

TEST_CASE("pe_step is deterministic") {
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> word(0, 0xFFFF);
  for (int i = 0; i < 200; ++i) {
    PEState s;
    for (auto& g : s.gpr) g = static_cast<word_t>(word(rng));
    s.nfu_out = static_cast<word_t>(word(rng));
    NeighborView view;
    for (auto& v : view.values) v = static_cast<word_t>(word(rng));
    Move m = Move::imm(static_cast<word_t>(word(rng)), Dst::NfuTrigReadNeighbour);
    CHECK(pe_step(s, m, view) == pe_step(s, m, view));
  }
}
