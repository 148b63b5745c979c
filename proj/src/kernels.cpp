#include "meshtta/kernels.hpp"

#include <bit>
#include <cstdlib>
#include <set>

#include "meshtta/plane.hpp"

namespace meshtta {

namespace {

struct Emitter {
  std::vector<Move> moves;
  void imm(std::uint16_t v, Dst d) { moves.push_back(Move::imm(v, d)); }
  void mv(Src s, Dst d) { moves.push_back(Move::reg(s, d)); }
  void mv(Guard g, Src s, Dst d) { moves.push_back(Move::reg(g, s, d)); }
  void halt() { imm(0, Dst::GcuHalt); }

  Program finish(std::string name) {
    Program p;
    p.name = std::move(name);
    p.moves = std::move(moves);
    return p;
  }
};

int count_gprs(const Program& p) {
  std::set<int> used;
  for (const Move& m : p.moves) {
    if (!m.uses_immediate && static_cast<int>(m.src) < 8) used.insert(static_cast<int>(m.src));
    if (static_cast<int>(m.dst) < 8) used.insert(static_cast<int>(m.dst));
  }
  return static_cast<int>(used.size());
}

int count_bools(const Program& p) {
  std::set<int> used;
  for (const Move& m : p.moves) {
    if (m.guard == Guard::IfB0 || m.guard == Guard::IfNotB0) used.insert(0);
    if (m.guard == Guard::IfB1 || m.guard == Guard::IfNotB1) used.insert(1);
    if (!m.uses_immediate && (m.src == Src::Bool0 || m.src == Src::Bool1))
      used.insert(static_cast<int>(m.src) - static_cast<int>(Src::Bool0));
    if (m.dst == Dst::Bool0 || m.dst == Dst::Bool1)
      used.insert(static_cast<int>(m.dst) - static_cast<int>(Dst::Bool0));
  }
  return static_cast<int>(used.size());
}

KernelProgramReport make_report(Program p) {
  KernelProgramReport r;
  r.predicted_cycles = predicted_cycles(p);
  r.registers_used = count_gprs(p);
  r.bool_registers_used = count_bools(p);
  r.program = std::move(p);
  return r;
}

// direction index for a kernel tap at (row r, col c), center excluded
int tap_direction(int r, int c) {
  const int dx = c - 1;
  const int dy = r - 1;
  for (int k = 0; k < 8; ++k)
    if (kNeighborDx[k] == dx && kNeighborDy[k] == dy) return k;
  throw std::logic_error("not a neighbor tap");
}

// adds the value already latched in LOGIC.out (negated when neg) into RF.3
void accumulate_logic_out(Emitter& a, bool neg) {
  if (neg) {
    a.imm(0xFFFF, Dst::LogicIn2);
    a.mv(Src::LogicOut, Dst::LogicTrigXor);
  }
  a.mv(Src::Gpr3, Dst::AluIn2);
  a.mv(Src::LogicOut, Dst::AluTrigAdd);
  a.mv(Src::AluOut, Dst::Gpr3);
}

} // namespace

KernelProgramReport lbp3x3_program() {
  Emitter a;
  a.imm(0, Dst::Gpr3);  // accumulator
  a.imm(0, Dst::Gpr2);  // zero constant for the guarded clear
  for (int k = 0; k < 8; ++k) {
    a.imm(static_cast<std::uint16_t>(k), Dst::NfuTrigReadNeighbour);
    a.mv(Src::Gpr0, Dst::AluIn2);                    // center
    a.mv(Src::NfuOut, Dst::AluTrigGtu);              // neighbor > center
    a.imm(static_cast<std::uint16_t>(1u << k), Dst::Gpr1);
    a.mv(Src::AluOut, Dst::Bool0);
    a.mv(Guard::IfNotB0, Src::Gpr2, Dst::Gpr1);      // clear the bit weight
    a.mv(Src::Gpr1, Dst::AluIn2);
    a.mv(Src::Gpr3, Dst::AluTrigAdd);
    a.mv(Src::AluOut, Dst::Gpr3);
  }
  a.halt();
  return make_report(a.finish("lbp3x3"));
}

KernelProgramReport conv3x3_program(const Kernel3x3& k) {
  bool any_nonzero = false;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      int w = k.weights[r][c];
      if (w != 0) any_nonzero = true;
      if (w <= -32768 || w >= 32768)
        throw std::invalid_argument("kernel weight magnitude must be below 2^15");
    }
  if (!any_nonzero) throw std::invalid_argument("kernel needs at least one nonzero weight");
  if (k.post_shift >= 16) throw std::invalid_argument("post_shift must be below 16");

  Emitter a;
  a.imm(0, Dst::Gpr3);
  int negatives = 0;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      const int w = k.weights[r][c];
      if (w == 0) continue;
      const bool neg = w < 0;
      const unsigned mag = static_cast<unsigned>(neg ? -w : w);
      negatives += neg;
      const bool center = r == 1 && c == 1;
      if (!center)
        a.imm(static_cast<std::uint16_t>(tap_direction(r, c)), Dst::NfuTrigReadNeighbour);
      const Src pixel = center ? Src::Gpr0 : Src::NfuOut;

      if (mag == 1) {
        if (!neg) {
          a.mv(Src::Gpr3, Dst::AluIn2);
          a.mv(pixel, Dst::AluTrigAdd);
          a.mv(Src::AluOut, Dst::Gpr3);
        } else {
          a.imm(0xFFFF, Dst::LogicIn2);
          a.mv(pixel, Dst::LogicTrigXor);
          a.mv(Src::Gpr3, Dst::AluIn2);
          a.mv(Src::LogicOut, Dst::AluTrigAdd);
          a.mv(Src::AluOut, Dst::Gpr3);
        }
      } else if ((mag & (mag - 1)) == 0) {
        // single-bit weight: one shift, straight into the accumulator
        a.mv(pixel, Dst::LogicIn2);
        a.imm(static_cast<std::uint16_t>(std::countr_zero(mag)), Dst::LogicTrigShl);
        accumulate_logic_out(a, neg);
      } else {
        // shift-add over the binary expansion of |w| into RF.2
        a.mv(pixel, Dst::LogicIn2);
        a.imm(0, Dst::Gpr2);
        for (int b = 0; b < 16; ++b) {
          if (!((mag >> b) & 1u)) continue;
          a.imm(static_cast<std::uint16_t>(b), Dst::LogicTrigShl);
          a.mv(Src::Gpr2, Dst::AluIn2);
          a.mv(Src::LogicOut, Dst::AluTrigAdd);
          a.mv(Src::AluOut, Dst::Gpr2);
        }
        if (!neg) {
          a.mv(Src::Gpr3, Dst::AluIn2);
          a.mv(Src::Gpr2, Dst::AluTrigAdd);
          a.mv(Src::AluOut, Dst::Gpr3);
        } else {
          a.imm(0xFFFF, Dst::LogicIn2);
          a.mv(Src::Gpr2, Dst::LogicTrigXor);
          a.mv(Src::Gpr3, Dst::AluIn2);
          a.mv(Src::LogicOut, Dst::AluTrigAdd);
          a.mv(Src::AluOut, Dst::Gpr3);
        }
      }
    }
  }
  if (negatives > 0) {
    // each negated term contributed ~p = -p - 1; add the count back once
    a.imm(static_cast<std::uint16_t>(negatives), Dst::AluIn2);
    a.mv(Src::Gpr3, Dst::AluTrigAdd);
    a.mv(Src::AluOut, Dst::Gpr3);
  }
  if (k.post_shift > 0) {
    a.mv(Src::Gpr3, Dst::LogicIn2);
    a.imm(static_cast<std::uint16_t>(k.post_shift), Dst::LogicTrigShr);
    a.mv(Src::LogicOut, Dst::Gpr3);
  }
  a.halt();
  return make_report(a.finish("conv3x3"));
}

KernelProgramReport maxpool_program(int window, unsigned stride) {
  if (window != 2 && window != 3)
    throw std::invalid_argument("pooling window must be 2 or 3");
  if (stride == 0 || (stride & (stride - 1)) != 0 || stride > 32768)
    throw std::invalid_argument("stride must be a power of two");

  Emitter a;
  const auto mask = static_cast<std::uint16_t>(stride - 1);
  // active iff (x AND mask) == 0 and (y AND mask) == 0; flag in BOOL.0 and RF.1
  a.imm(0, Dst::NfuTrigReadIndex);       // x
  a.imm(mask, Dst::LogicIn2);
  a.mv(Src::NfuOut, Dst::LogicTrigAnd);
  a.imm(0, Dst::AluIn2);
  a.mv(Src::LogicOut, Dst::AluTrigEq);
  a.imm(1, Dst::NfuTrigReadIndex);       // y
  a.mv(Src::AluOut, Dst::Gpr1);
  a.mv(Src::NfuOut, Dst::LogicTrigAnd);
  a.mv(Src::LogicOut, Dst::AluTrigEq);
  a.mv(Src::Gpr1, Dst::LogicIn2);
  a.mv(Src::AluOut, Dst::LogicTrigAnd);
  a.mv(Src::LogicOut, Dst::Bool0);
  a.mv(Src::LogicOut, Dst::Gpr1);

  a.imm(0, Dst::Gpr3);
  a.mv(Guard::IfB0, Src::Gpr0, Dst::Gpr3);  // start the max at the own pixel

  // window 2 covers {self, E, S, SE}; window 3 covers self + all 8 neighbors
  const std::vector<int> dirs = window == 2 ? std::vector<int>{2, 4, 3}
                                            : std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7};
  for (int dir : dirs) {
    a.imm(static_cast<std::uint16_t>(dir), Dst::NfuTrigReadNeighbour);
    a.mv(Src::NfuOut, Dst::Gpr2);
    a.mv(Src::Gpr3, Dst::AluIn2);
    a.mv(Src::Gpr2, Dst::AluTrigGtu);      // candidate > current max
    a.mv(Src::Gpr1, Dst::LogicIn2);
    a.mv(Src::AluOut, Dst::LogicTrigAnd);  // and the PE is active
    a.mv(Src::LogicOut, Dst::Bool1);
    a.mv(Guard::IfB1, Src::Gpr2, Dst::Gpr3);
  }
  a.halt();
  return make_report(a.finish(window == 2 ? "maxpool2" : "maxpool3"));
}

std::uint64_t predicted_cycles(const Program& p) {
  for (std::size_t i = 0; i < p.moves.size(); ++i) {
    const Move& m = p.moves[i];
    if (m.dst == Dst::GcuPc && (m.guard != Guard::Always || !m.uses_immediate))
      throw std::invalid_argument(
          "instruction " + std::to_string(i) +
          " makes control flow input-dependent (guarded or register-sourced pc write); "
          "the cycle count cannot be predicted statically");
    if (m.dst == Dst::GcuHalt && m.guard != Guard::Always)
      throw std::invalid_argument(
          "instruction " + std::to_string(i) +
          " makes termination input-dependent (guarded halt); "
          "the cycle count cannot be predicted statically");
  }
  std::vector<bool> visited(p.moves.size(), false);
  std::uint64_t count = 0;
  std::size_t pc = 0;
  while (pc < p.moves.size()) {
    if (visited[pc])
      throw std::invalid_argument("program loops forever (instruction " + std::to_string(pc) +
                                  " revisited)");
    visited[pc] = true;
    ++count;
    const Move& m = p.moves[pc];
    if (m.dst == Dst::GcuHalt) break;
    pc = m.dst == Dst::GcuPc ? m.immediate : pc + 1;
  }
  return count;
}

Kernel3x3 sobel_x_kernel() {
  Kernel3x3 k;
  int w[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  std::copy(&w[0][0], &w[0][0] + 9, &k.weights[0][0]);
  return k;
}

Kernel3x3 sobel_y_kernel() {
  Kernel3x3 k;
  int w[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
  std::copy(&w[0][0], &w[0][0] + 9, &k.weights[0][0]);
  return k;
}

Kernel3x3 box_blur_kernel() {
  Kernel3x3 k;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) k.weights[r][c] = 1;
  k.post_shift = 3;
  return k;
}

std::vector<std::string> builtin_kernel_names() {
  return {"lbp3x3", "sobel_x", "sobel_y", "box_blur", "conv3x3", "maxpool"};
}

KernelProgramReport kernel_by_name(const std::string& name) {
  if (name == "lbp3x3") return lbp3x3_program();
  if (name == "sobel_x") {
    auto r = conv3x3_program(sobel_x_kernel());
    r.program.name = "sobel_x";
    return r;
  }
  if (name == "sobel_y") {
    auto r = conv3x3_program(sobel_y_kernel());
    r.program.name = "sobel_y";
    return r;
  }
  if (name == "box_blur") {
    auto r = conv3x3_program(box_blur_kernel());
    r.program.name = "box_blur";
    return r;
  }
  throw std::invalid_argument("unknown kernel '" + name +
                              "' (conv3x3 and maxpool take parameters; use their generators)");
}

} // namespace meshtta
