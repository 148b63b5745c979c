#include <random>

#include "doctest.h"
#include "meshtta/oracle.hpp"

using namespace meshtta;

namespace {

Kernel3x3 make_kernel(std::initializer_list<int> w, unsigned post_shift = 0) {
  Kernel3x3 k;
  auto it = w.begin();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) k.weights[r][c] = *it++;
  k.post_shift = post_shift;
  return k;
}

ImagePlane random_image(int w, int h, std::mt19937& rng, int maxval = 0xFFFF) {
  ImagePlane img(w, h);
  std::uniform_int_distribution<int> pix(0, maxval);
  for (auto& p : img.pixels) p = static_cast<word_t>(pix(rng));
  return img;
}

// deliberately different convolution: pad first, then a plain loop
ImagePlane conv3x3_padded(const ImagePlane& img, const Kernel3x3& k, BoundaryPolicy b) {
  const int w = img.width, h = img.height;
  std::vector<long long> padded((w + 2) * (h + 2));
  for (int y = -1; y <= h; ++y)
    for (int x = -1; x <= w; ++x) padded[(y + 1) * (w + 2) + (x + 1)] = img.sample(x, y, b);
  ImagePlane out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      long long sum = 0;
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) sum += k.weights[r][c] * padded[(y + r) * (w + 2) + (x + c)];
      sum %= 65536;
      if (sum < 0) sum += 65536;
      out.at(x, y) = static_cast<word_t>(static_cast<word_t>(sum) >> k.post_shift);
    }
  }
  return out;
}

} // namespace

TEST_CASE("lbp_ref: uniform image gives all zeros (strict compare)") {
  ImagePlane img(9, 7, 123);
  for (auto b : {BoundaryPolicy::Zero, BoundaryPolicy::Clamp, BoundaryPolicy::Wrap})
    CHECK(lbp_ref(img, b) == ImagePlane(9, 7, 0));
}

TEST_CASE("lbp_ref: a single bright pixel sets one bit in each neighbor") {
  ImagePlane img(7, 7, 0);
  img.at(3, 3) = 200;
  ImagePlane codes = lbp_ref(img, BoundaryPolicy::Zero);
  for (int k = 0; k < 8; ++k) {
    int nx = 3 + kNeighborDx[k];
    int ny = 3 + kNeighborDy[k];
    int opposite = (k + 4) % 8;
    CHECK(codes.at(nx, ny) == static_cast<word_t>(1u << opposite));
  }
  CHECK(codes.at(3, 3) == 0);
}

TEST_CASE("lbp_ref: north bit is the LSB") {
  ImagePlane img(3, 3, 0);
  img.at(1, 1) = 5;
  img.at(1, 0) = 9;  // north neighbor above the center
  img.at(0, 0) = 5;
  img.at(2, 2) = 4;
  ImagePlane codes = lbp_ref(img, BoundaryPolicy::Zero);
  CHECK(codes.at(1, 1) == 1);
}

TEST_CASE("lbp_ref: output is always a byte") {
  std::mt19937 rng(61);
  ImagePlane img = random_image(16, 16, rng);
  for (auto b : {BoundaryPolicy::Zero, BoundaryPolicy::Clamp, BoundaryPolicy::Wrap})
    for (word_t v : lbp_ref(img, b).pixels) CHECK(v < 256);
}

TEST_CASE("conv3x3_ref: identity and box kernels") {
  std::mt19937 rng(67);
  ImagePlane img = random_image(8, 8, rng);
  Kernel3x3 identity = make_kernel({0, 0, 0, 0, 1, 0, 0, 0, 0});
  CHECK(conv3x3_ref(img, identity, BoundaryPolicy::Zero) == img);

  ImagePlane uniform(6, 6, 10);
  Kernel3x3 box = make_kernel({1, 1, 1, 1, 1, 1, 1, 1, 1});
  ImagePlane out = conv3x3_ref(uniform, box, BoundaryPolicy::Zero);
  for (int y = 1; y < 5; ++y)
    for (int x = 1; x < 5; ++x) CHECK(out.at(x, y) == 90);
  // with clamp padding even the border sees nine samples
  CHECK(conv3x3_ref(uniform, box, BoundaryPolicy::Clamp).at(0, 0) == 90);
}

TEST_CASE("conv3x3_ref: all-zero image maps to all-zero output") {
  ImagePlane zeros(5, 4, 0);
  Kernel3x3 k = make_kernel({3, -7, 2, 100, -5, 0, 9, 1, -30}, 2);
  CHECK(conv3x3_ref(zeros, k, BoundaryPolicy::Wrap) == ImagePlane(5, 4, 0));
}

TEST_CASE("conv3x3_ref: agrees with an independently written convolution") {
  std::mt19937 rng(71);
  std::uniform_int_distribution<int> weight(-300, 300);
  std::uniform_int_distribution<int> shift(0, 4);
  for (int round = 0; round < 30; ++round) {
    ImagePlane img = random_image(9, 6, rng);
    Kernel3x3 k;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) k.weights[r][c] = weight(rng);
    k.post_shift = static_cast<unsigned>(shift(rng));
    for (auto b : {BoundaryPolicy::Zero, BoundaryPolicy::Clamp, BoundaryPolicy::Wrap})
      CHECK(conv3x3_ref(img, k, b) == conv3x3_padded(img, k, b));
  }
}

TEST_CASE("maxpool_ref: ascending 4x4 plane, window 2, stride 2") {
  ImagePlane img(4, 4);
  for (int i = 0; i < 16; ++i) img.pixels[i] = static_cast<word_t>(i + 1);
  ImagePlane out = maxpool_ref(img, 2, 2, BoundaryPolicy::Zero);
  CHECK(out.at(0, 0) == 6);
  CHECK(out.at(2, 0) == 8);
  CHECK(out.at(0, 2) == 14);
  CHECK(out.at(2, 2) == 16);
  // inactive sites stay zero
  int nonzero = 0;
  for (word_t v : out.pixels) nonzero += v != 0;
  CHECK(nonzero == 4);
}

TEST_CASE("maxpool_ref: uniform plane and corner padding") {
  ImagePlane img(8, 8, 42);
  ImagePlane out = maxpool_ref(img, 3, 2, BoundaryPolicy::Zero);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x)
      CHECK(out.at(x, y) == ((x % 2 == 0 && y % 2 == 0) ? 42 : 0));
  // window 3 at the corner includes padded zeros, which cannot win the max
  CHECK(out.at(0, 0) == 42);
}
