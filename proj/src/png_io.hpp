#pragma once

#include <string>

#include "image.hpp"

namespace qalpha {

// 8-bit RGB PNG. Palette, grayscale and 16-bit inputs are expanded to RGB8;
// alpha is stripped.
RasterImage read_png(const std::string& path);
void write_png(const RasterImage& img, const std::string& path);

}  // namespace qalpha
