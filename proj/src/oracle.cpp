#include "meshtta/oracle.hpp"

#include <algorithm>

namespace meshtta {

ImagePlane lbp_ref(const ImagePlane& img, BoundaryPolicy boundary) {
  ImagePlane out(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const word_t center = img.at(x, y);
      word_t code = 0;
      for (int k = 0; k < 8; ++k) {
        word_t n = img.sample(x + kNeighborDx[k], y + kNeighborDy[k], boundary);
        if (n > center) code |= static_cast<word_t>(1u << k);
      }
      out.at(x, y) = code;
    }
  }
  return out;
}

ImagePlane conv3x3_ref(const ImagePlane& img, const Kernel3x3& k, BoundaryPolicy boundary) {
  ImagePlane out(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      std::int64_t sum = 0;
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
          sum += static_cast<std::int64_t>(k.weights[r][c]) *
                 img.sample(x + c - 1, y + r - 1, boundary);
      auto wrapped = static_cast<word_t>(static_cast<std::uint64_t>(sum));
      out.at(x, y) = static_cast<word_t>(wrapped >> k.post_shift);
    }
  }
  return out;
}

ImagePlane maxpool_ref(const ImagePlane& img, int window, unsigned stride,
                       BoundaryPolicy boundary) {
  if (window != 2 && window != 3)
    throw std::invalid_argument("pooling window must be 2 or 3");
  if (stride == 0 || (stride & (stride - 1)) != 0)
    throw std::invalid_argument("stride must be a power of two");
  ImagePlane out(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      if ((static_cast<unsigned>(x) & (stride - 1)) || (static_cast<unsigned>(y) & (stride - 1)))
        continue;
      word_t best = img.at(x, y);
      if (window == 2) {
        for (auto [dx, dy] : {std::pair{1, 0}, {0, 1}, {1, 1}})
          best = std::max(best, img.sample(x + dx, y + dy, boundary));
      } else {
        for (int k = 0; k < 8; ++k)
          best = std::max(best, img.sample(x + kNeighborDx[k], y + kNeighborDy[k], boundary));
      }
      out.at(x, y) = best;
    }
  }
  return out;
}

} // namespace meshtta
