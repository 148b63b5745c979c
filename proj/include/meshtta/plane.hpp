#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace meshtta {

using word_t = std::uint16_t;

// Errors carrying enough context for CLI exit-code mapping.
struct ParseError : std::runtime_error {
  std::size_t line;
  ParseError(std::size_t line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class BoundaryPolicy { Zero, Clamp, Wrap };

BoundaryPolicy boundary_from_name(const std::string& name);
const char* boundary_name(BoundaryPolicy policy);

// Neighbor direction order used by the NFU, the kernels and the oracles:
// 0=N 1=NE 2=E 3=SE 4=S 5=SW 6=W 7=NW (clockwise from north).
inline constexpr int kNeighborDx[8] = {0, 1, 1, 1, 0, -1, -1, -1};
inline constexpr int kNeighborDy[8] = {-1, -1, 0, 1, 1, 1, 0, -1};

// 2-D grid of 16-bit words, row major; x is the column, y the row.
// 8-bit sources are zero-extended on load.
struct ImagePlane {
  int width = 0;
  int height = 0;
  std::vector<word_t> pixels;

  ImagePlane() = default;
  ImagePlane(int w, int h, word_t fill = 0);

  word_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  word_t& at(int x, int y) {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }

  // Boundary-resolved read: off-grid coordinates follow the policy
  // (Zero -> 0, Clamp -> nearest edge pixel, Wrap -> toroidal).
  word_t sample(int x, int y, BoundaryPolicy policy) const;

  bool operator==(const ImagePlane&) const = default;
};

} // namespace meshtta
