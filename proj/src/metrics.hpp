#pragma once

#include "image.hpp"

namespace qalpha {

// Block tiling for the contrast measures. Incomplete edge blocks are
// discarded (floor division).
struct BlockSpec {
  int width = 8;   // L2
  int height = 8;  // L1
};

// Lower clamp for block extrema; keeps the measure finite when a block
// contains a zero and nonnegative when a block is entirely dark.
inline constexpr double kBlockClamp = 1e-3;

// Mean over complete blocks of 20*log10(blockmax/blockmin) with the extrema
// taken across all four component planes (e, r, g, b). Both extrema are
// clamped below at kBlockClamp. The image is expected rescaled to [0, 255]
// with e carried as-is.
double ceme(const RealQImage& img, const BlockSpec& blocks);

// Single-plane variant.
double eme(const Plane& plane, int width, int height, const BlockSpec& blocks);

}  // namespace qalpha
