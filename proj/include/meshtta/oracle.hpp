#pragma once

// Scalar reference implementations for every kernel. These intentionally
// mirror the datapath quirks (mod-2^16 accumulation, boundary policy,
// pooling anchor) so array-vs-oracle comparisons are bit-exact.

#include "meshtta/kernels.hpp"
#include "meshtta/plane.hpp"

namespace meshtta {

// Per-pixel 8-bit code, bit k set iff neighbor_k > center (unsigned, strict),
// k in the fixed direction order (LSB = North, clockwise).
ImagePlane lbp_ref(const ImagePlane& img, BoundaryPolicy boundary);

// Sum of w[r][c] * pixel in two's complement, reduced mod 2^16, then shifted
// logically right by post_shift.
ImagePlane conv3x3_ref(const ImagePlane& img, const Kernel3x3& k, BoundaryPolicy boundary);

// Zero except at (x, y) with x, y multiples of stride; there the window max.
// Window 2 covers {self, E, S, SE}; window 3 covers self plus all 8 neighbors.
ImagePlane maxpool_ref(const ImagePlane& img, int window, unsigned stride,
                       BoundaryPolicy boundary);

} // namespace meshtta
