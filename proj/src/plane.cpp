#include "meshtta/plane.hpp"

#include <algorithm>

namespace meshtta {

BoundaryPolicy boundary_from_name(const std::string& name) {
  std::string n;
  n.reserve(name.size());
  for (char c : name) n.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (n == "zero") return BoundaryPolicy::Zero;
  if (n == "clamp") return BoundaryPolicy::Clamp;
  if (n == "wrap") return BoundaryPolicy::Wrap;
  throw std::invalid_argument("unknown boundary policy '" + name + "' (expected zero, clamp or wrap)");
}

const char* boundary_name(BoundaryPolicy policy) {
  switch (policy) {
    case BoundaryPolicy::Zero: return "zero";
    case BoundaryPolicy::Clamp: return "clamp";
    case BoundaryPolicy::Wrap: return "wrap";
  }
  return "?";
}

ImagePlane::ImagePlane(int w, int h, word_t fill) : width(w), height(h) {
  if (w <= 0 || h <= 0) throw std::invalid_argument("image dimensions must be positive");
  pixels.assign(static_cast<std::size_t>(w) * h, fill);
}

namespace {
int wrap_coord(int v, int n) {
  int m = v % n;
  return m < 0 ? m + n : m;
}
} // namespace

word_t ImagePlane::sample(int x, int y, BoundaryPolicy policy) const {
  if (x >= 0 && x < width && y >= 0 && y < height) return at(x, y);
  switch (policy) {
    case BoundaryPolicy::Zero:
      return 0;
    case BoundaryPolicy::Clamp:
      return at(std::clamp(x, 0, width - 1), std::clamp(y, 0, height - 1));
    case BoundaryPolicy::Wrap:
      return at(wrap_coord(x, width), wrap_coord(y, height));
  }
  return 0;
}

} // namespace meshtta
