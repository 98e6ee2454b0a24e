#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "quaternion.hpp"

namespace qalpha {

enum class ColorModel { rgb, xyz, generic4 };
enum class EvenMode { zero, gray, channel4 };

using Plane = std::vector<double>;

// Planar raster image. 8-bit-sourced content keeps integer-valued samples in
// [0, 255]; intermediate results may hold arbitrary reals.
struct RasterImage {
  int width = 0;
  int height = 0;
  ColorModel model = ColorModel::rgb;
  std::vector<Plane> planes;  // 3 or 4 planes, each width*height, row-major

  static RasterImage create(int width, int height, int channels,
                            ColorModel model = ColorModel::rgb);

  int channels() const { return static_cast<int>(planes.size()); }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
  double& at(int ch, int x, int y) { return planes[ch][static_cast<std::size_t>(y) * width + x]; }
  double at(int ch, int x, int y) const {
    return planes[ch][static_cast<std::size_t>(y) * width + x];
  }
};

// Quaternion-encoded image. even_mode records how the scalar component was
// filled at encoding time.
struct QuaternionImage {
  int width = 0;
  int height = 0;
  EvenMode even_mode = EvenMode::zero;
  std::vector<Quaternion> samples;  // row-major

  static QuaternionImage create(int width, int height, EvenMode mode);
  Quaternion& at(int x, int y) { return samples[static_cast<std::size_t>(y) * width + x]; }
  const Quaternion& at(int x, int y) const {
    return samples[static_cast<std::size_t>(y) * width + x];
  }
};

// Four-plane view (e, R, G, B) of a quaternion-valued image, typically the
// output of an inverse transform. Values are unbounded reals.
struct RealQImage {
  int width = 0;
  int height = 0;
  Plane e, r, g, b;

  static RealQImage create(int width, int height);
  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

struct DecodedImage {
  RasterImage raster;  // the three color planes
  Plane scalar;        // the scalar (even) plane, reported alongside
};

// Per-pixel packing: 3-channel rasters fill (b, c, d) from channels 1..3 with
// the scalar part set by the even mode; channel4 packs (a, b, c, d) from a
// 4-channel raster.
QuaternionImage encode(const RasterImage& img, EvenMode mode);
DecodedImage decode(const QuaternionImage& q);
DecodedImage decode(const RealQImage& q);
RealQImage to_realq(const QuaternionImage& q);

// Linear sRGB/D65 matrix on samples normalized to [0, 1], scaled back by 255.
// No gamma linearization; the map is exactly invertible.
RasterImage convert_colorspace(const RasterImage& img, ColorModel target);

// Matrix-only XYZ -> RGB conversion of unbounded planes (no renormalization).
void xyz_planes_to_rgb(Plane& x, Plane& y, Plane& z);

RasterImage negate(const RasterImage& img);

// Joint min-max map of all listed planes onto [0, 255]. A degenerate range
// (max == min) leaves samples at their input value clamped to [0, 255].
std::vector<Plane> rescale_planes(const std::vector<const Plane*>& planes);
RasterImage rescale_to_8bit(const std::vector<const Plane*>& planes, int width, int height,
                            ColorModel model = ColorModel::rgb);
// Rescales r, g, b jointly; the e plane takes no part in the statistics or
// the result and stays with the caller.
RasterImage rescale_to_8bit(const RealQImage& q);

using ChannelHistogram = std::array<std::uint64_t, 256>;

// Unit-width bins [k, k+1); the final bin is closed so 255 lands in bin 255.
std::vector<ChannelHistogram> histogram(const RasterImage& img);

// Area-averaged resize so that max(width, height) == max_side. No-op when the
// image already fits.
RasterImage downscale(const RasterImage& img, int max_side);

// Interleaved 8-bit samples, clamped and rounded half away from zero.
std::vector<std::uint8_t> quantize8(const RasterImage& img);

}  // namespace qalpha
