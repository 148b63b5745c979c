#pragma once

// Transport programs for the shipped image operations. All kernels assume the
// loader convention (own pixel in RF.0, plane in the shared registers) and
// deliver their result in RF.3. Schedules are straight-line, so the cycle
// count is input-independent.

#include <cstdint>
#include <string>
#include <vector>

#include "meshtta/isa.hpp"

namespace meshtta {

// 3x3 weight matrix; weights[r][c] with row 0 the north row, column 0 the
// west column. Two's complement, |w| < 2^15. post_shift is a logical right
// shift applied to the wrapped sum.
struct Kernel3x3 {
  int weights[3][3] = {};
  unsigned post_shift = 0;
};

struct KernelProgramReport {
  Program program;
  std::uint64_t predicted_cycles = 0;
  int registers_used = 0;
  int bool_registers_used = 0;
};

// LBP code in RF.3: bit k set iff neighbor_k > own pixel (unsigned, strict),
// LSB = North, clockwise. Uses the comparison-then-guarded-clear idiom with
// one boolean register and two scratch GPRs.
KernelProgramReport lbp3x3_program();

// RF.3 = (sum of w * neighborhood) mod 2^16 >> post_shift. Weights in
// {-1, 0, 1} add directly; larger magnitudes go through shift-add over the
// binary expansion; negative weights accumulate the complement, with one
// final correction add of the negative-weight count.
KernelProgramReport conv3x3_program(const Kernel3x3& k);

// Max over the pooling window into RF.3 on PEs whose x and y are both
// multiples of stride (a power of two; tested with read_index + AND + EQ,
// no modulo). Inactive PEs leave RF.3 = 0; no kernel writes shared registers.
KernelProgramReport maxpool_program(int window, unsigned stride);

// Exact cycle count of a program whose control flow is input-independent.
// Refuses guarded pc/halt writes and register-sourced pc writes.
std::uint64_t predicted_cycles(const Program& p);

Kernel3x3 sobel_x_kernel();
Kernel3x3 sobel_y_kernel();
Kernel3x3 box_blur_kernel();  // all ones, post_shift 3

std::vector<std::string> builtin_kernel_names();

// Resolves lbp3x3, sobel_x, sobel_y and box_blur. Parameterized kernels
// (conv3x3, maxpool) are built through their generators directly.
KernelProgramReport kernel_by_name(const std::string& name);

} // namespace meshtta
