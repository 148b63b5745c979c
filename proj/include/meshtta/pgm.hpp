#pragma once

// PGM (netpbm) reader/writer. Reads P2 and P5 with maxval up to 65535
// (two-byte big-endian samples above 255, per the format); values are
// zero-extended into the 16-bit plane. Writes P5 with maxval 255 when every
// value fits a byte, otherwise maxval 65535.

#include <iosfwd>
#include <string>

#include "meshtta/plane.hpp"

namespace meshtta {

ImagePlane read_pgm(std::istream& in);
ImagePlane read_pgm_file(const std::string& path);

void write_pgm(const ImagePlane& img, std::ostream& out, bool ascii = false);
void write_pgm_file(const ImagePlane& img, const std::string& path, bool ascii = false);

} // namespace meshtta
