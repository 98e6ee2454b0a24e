#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"

namespace qalpha {

namespace {

struct BlockGrid {
  int cols = 0;
  int rows = 0;
};

BlockGrid block_grid(int width, int height, const BlockSpec& blocks) {
  if (blocks.width <= 0 || blocks.height <= 0) fail_arg("block dimensions must be positive");
  BlockGrid g{width / blocks.width, height / blocks.height};
  if (g.cols < 1 || g.rows < 1) fail_arg("image is smaller than one block");
  return g;
}

double block_score(double mx, double mn) {
  mx = std::max(mx, kBlockClamp);
  mn = std::max(mn, kBlockClamp);
  return 20.0 * std::log10(mx / mn);
}

}  // namespace

double ceme(const RealQImage& img, const BlockSpec& blocks) {
  const BlockGrid g = block_grid(img.width, img.height, blocks);
  const Plane* planes[4] = {&img.e, &img.r, &img.g, &img.b};
  double total = 0.0;
  for (int by = 0; by < g.rows; ++by) {
    for (int bx = 0; bx < g.cols; ++bx) {
      double mx = -std::numeric_limits<double>::infinity();
      double mn = std::numeric_limits<double>::infinity();
      for (const Plane* p : planes) {
        for (int y = by * blocks.height; y < (by + 1) * blocks.height; ++y) {
          const std::size_t row = static_cast<std::size_t>(y) * img.width;
          for (int x = bx * blocks.width; x < (bx + 1) * blocks.width; ++x) {
            const double v = (*p)[row + x];
            mx = std::max(mx, v);
            mn = std::min(mn, v);
          }
        }
      }
      total += block_score(mx, mn);
    }
  }
  return total / (static_cast<double>(g.rows) * g.cols);
}

double eme(const Plane& plane, int width, int height, const BlockSpec& blocks) {
  if (static_cast<std::size_t>(width) * height != plane.size())
    fail_arg("plane size does not match the stated dimensions");
  const BlockGrid g = block_grid(width, height, blocks);
  double total = 0.0;
  for (int by = 0; by < g.rows; ++by) {
    for (int bx = 0; bx < g.cols; ++bx) {
      double mx = -std::numeric_limits<double>::infinity();
      double mn = std::numeric_limits<double>::infinity();
      for (int y = by * blocks.height; y < (by + 1) * blocks.height; ++y) {
        const std::size_t row = static_cast<std::size_t>(y) * width;
        for (int x = bx * blocks.width; x < (bx + 1) * blocks.width; ++x) {
          const double v = plane[row + x];
          mx = std::max(mx, v);
          mn = std::min(mn, v);
        }
      }
      total += block_score(mx, mn);
    }
  }
  return total / (static_cast<double>(g.rows) * g.cols);
}

}  // namespace qalpha
