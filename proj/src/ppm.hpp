#pragma once

#include <string>

#include "image.hpp"

namespace qalpha {

// Binary PPM (P6, maxval 255). Reading preserves sample bytes exactly;
// writing emits the canonical "P6\n<w> <h>\n255\n" header.
RasterImage read_ppm(const std::string& path);
void write_ppm(const RasterImage& img, const std::string& path);

}  // namespace qalpha
