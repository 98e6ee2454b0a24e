#pragma once

#include <string>

#include "image.hpp"

namespace qalpha {

// Dispatches on the file extension: .ppm / .pnm / .png.
RasterImage load_image(const std::string& path);
void save_image(const RasterImage& img, const std::string& path);

// RQI: binary container for a RealQImage ("RQI1\n<w> <h>\n" followed by the
// e, r, g, b planes as little-endian float64).
RealQImage read_rqi(const std::string& path);
void write_rqi(const RealQImage& q, const std::string& path);

}  // namespace qalpha
