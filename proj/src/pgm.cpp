#include "meshtta/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>

namespace meshtta {

namespace {

// next header token, skipping whitespace and '#' comments
std::string header_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {}
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

long header_int(std::istream& in, const char* what) {
  std::string tok = header_token(in);
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(),
                                  [](unsigned char ch) { return std::isdigit(ch); }))
    throw ParseError(0, std::string("bad PGM header: expected ") + what);
  return std::stol(tok);
}

} // namespace

ImagePlane read_pgm(std::istream& in) {
  std::string magic = header_token(in);
  if (magic != "P2" && magic != "P5")
    throw ParseError(0, "not a PGM file (magic '" + magic + "')");
  long width = header_int(in, "width");
  long height = header_int(in, "height");
  long maxval = header_int(in, "maxval");
  if (width < 1 || height < 1) throw ParseError(0, "bad PGM dimensions");
  if (maxval < 1 || maxval > 65535) throw ParseError(0, "PGM maxval out of range");

  ImagePlane img(static_cast<int>(width), static_cast<int>(height));
  const std::size_t count = img.pixels.size();
  if (magic == "P2") {
    for (std::size_t i = 0; i < count; ++i) {
      long v = header_int(in, "pixel value");
      if (v > maxval) throw ParseError(0, "pixel value exceeds maxval");
      img.pixels[i] = static_cast<word_t>(v);
    }
  } else {
    // the maxval token is followed by exactly one whitespace byte
    const int bytes = maxval > 255 ? 2 : 1;
    for (std::size_t i = 0; i < count; ++i) {
      int hi = in.get();
      if (hi == EOF) throw ParseError(0, "truncated PGM pixel data");
      if (bytes == 1) {
        img.pixels[i] = static_cast<word_t>(hi);
      } else {
        int lo = in.get();
        if (lo == EOF) throw ParseError(0, "truncated PGM pixel data");
        img.pixels[i] = static_cast<word_t>((hi << 8) | lo);  // big-endian
      }
    }
  }
  return img;
}

ImagePlane read_pgm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return read_pgm(in);
}

void write_pgm(const ImagePlane& img, std::ostream& out, bool ascii) {
  const word_t maxpix =
      img.pixels.empty() ? 0 : *std::max_element(img.pixels.begin(), img.pixels.end());
  const int maxval = maxpix > 255 ? 65535 : 255;
  out << (ascii ? "P2" : "P5") << "\n"
      << img.width << " " << img.height << "\n"
      << maxval << "\n";
  if (ascii) {
    for (int y = 0; y < img.height; ++y) {
      for (int x = 0; x < img.width; ++x) out << img.at(x, y) << (x + 1 < img.width ? " " : "");
      out << "\n";
    }
    return;
  }
  for (word_t v : img.pixels) {
    if (maxval > 255) out.put(static_cast<char>(v >> 8));
    out.put(static_cast<char>(v & 0xFF));
  }
}

void write_pgm_file(const ImagePlane& img, const std::string& path, bool ascii) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_pgm(img, out, ascii);
}

} // namespace meshtta
