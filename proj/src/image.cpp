#include "image.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"

namespace qalpha {

namespace {

constexpr double kRgbToXyz[3][3] = {{0.4124, 0.3576, 0.1805},
                                    {0.2126, 0.7152, 0.0722},
                                    {0.0193, 0.1192, 0.9505}};

struct Matrix3 {
  double m[3][3];
};

Matrix3 invert3x3(const double a[3][3]) {
  const double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                     a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                     a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  Matrix3 inv;
  inv.m[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) / det;
  inv.m[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / det;
  inv.m[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / det;
  inv.m[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) / det;
  inv.m[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / det;
  inv.m[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / det;
  inv.m[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) / det;
  inv.m[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / det;
  inv.m[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / det;
  return inv;
}

const Matrix3& xyz_to_rgb_matrix() {
  static const Matrix3 inv = invert3x3(kRgbToXyz);
  return inv;
}

void apply_color_matrix(Plane& p0, Plane& p1, Plane& p2, const double m[3][3]) {
  const std::size_t n = p0.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double v0 = p0[i], v1 = p1[i], v2 = p2[i];
    p0[i] = m[0][0] * v0 + m[0][1] * v1 + m[0][2] * v2;
    p1[i] = m[1][0] * v0 + m[1][1] * v1 + m[1][2] * v2;
    p2[i] = m[2][0] * v0 + m[2][1] * v1 + m[2][2] * v2;
  }
}

}  // namespace

RasterImage RasterImage::create(int width, int height, int channels, ColorModel model) {
  if (width <= 0 || height <= 0) fail_arg("image dimensions must be positive");
  if (channels != 3 && channels != 4) fail_arg("raster images carry 3 or 4 channels");
  RasterImage img;
  img.width = width;
  img.height = height;
  img.model = model;
  img.planes.assign(channels, Plane(static_cast<std::size_t>(width) * height, 0.0));
  return img;
}

QuaternionImage QuaternionImage::create(int width, int height, EvenMode mode) {
  if (width <= 0 || height <= 0) fail_arg("image dimensions must be positive");
  QuaternionImage q;
  q.width = width;
  q.height = height;
  q.even_mode = mode;
  q.samples.assign(static_cast<std::size_t>(width) * height, Quaternion{});
  return q;
}

RealQImage RealQImage::create(int width, int height) {
  if (width <= 0 || height <= 0) fail_arg("image dimensions must be positive");
  RealQImage q;
  q.width = width;
  q.height = height;
  const std::size_t n = static_cast<std::size_t>(width) * height;
  q.e.assign(n, 0.0);
  q.r.assign(n, 0.0);
  q.g.assign(n, 0.0);
  q.b.assign(n, 0.0);
  return q;
}

QuaternionImage encode(const RasterImage& img, EvenMode mode) {
  const int ch = img.channels();
  if (mode == EvenMode::channel4) {
    if (ch != 4) fail_arg("channel4 encoding needs a 4-channel image");
  } else if (ch != 3) {
    fail_arg("zero/gray encoding needs a 3-channel image");
  }
  QuaternionImage q = QuaternionImage::create(img.width, img.height, mode);
  const std::size_t n = img.pixel_count();
  if (mode == EvenMode::channel4) {
    for (std::size_t i = 0; i < n; ++i)
      q.samples[i] = Quaternion(img.planes[0][i], img.planes[1][i], img.planes[2][i],
                                img.planes[3][i]);
    return q;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double r = img.planes[0][i], g = img.planes[1][i], b = img.planes[2][i];
    const double a = (mode == EvenMode::gray) ? (r + g + b) / 3.0 : 0.0;
    q.samples[i] = Quaternion(a, r, g, b);
  }
  return q;
}

DecodedImage decode(const QuaternionImage& q) {
  DecodedImage out;
  out.raster = RasterImage::create(q.width, q.height, 3,
                                   q.even_mode == EvenMode::channel4 ? ColorModel::generic4
                                                                     : ColorModel::rgb);
  out.scalar.assign(q.samples.size(), 0.0);
  for (std::size_t i = 0; i < q.samples.size(); ++i) {
    const Quaternion& s = q.samples[i];
    out.scalar[i] = s.a;
    out.raster.planes[0][i] = s.b;
    out.raster.planes[1][i] = s.c;
    out.raster.planes[2][i] = s.d;
  }
  return out;
}

DecodedImage decode(const RealQImage& q) {
  DecodedImage out;
  out.raster = RasterImage::create(q.width, q.height, 3);
  out.raster.planes[0] = q.r;
  out.raster.planes[1] = q.g;
  out.raster.planes[2] = q.b;
  out.scalar = q.e;
  return out;
}

RealQImage to_realq(const QuaternionImage& q) {
  RealQImage out = RealQImage::create(q.width, q.height);
  for (std::size_t i = 0; i < q.samples.size(); ++i) {
    out.e[i] = q.samples[i].a;
    out.r[i] = q.samples[i].b;
    out.g[i] = q.samples[i].c;
    out.b[i] = q.samples[i].d;
  }
  return out;
}

RasterImage convert_colorspace(const RasterImage& img, ColorModel target) {
  if (img.model == ColorModel::generic4) fail_arg("cannot convert a generic 4-channel image");
  if (target != ColorModel::rgb && target != ColorModel::xyz)
    fail_arg("conversion target must be rgb or xyz");
  if (img.model == target) fail_arg("conversion source and target are the same model");

  RasterImage out = img;
  out.model = target;
  // Normalization by 255 and the scale back cancel through the linear map,
  // so the matrix applies to raw samples directly.
  if (target == ColorModel::xyz)
    apply_color_matrix(out.planes[0], out.planes[1], out.planes[2], kRgbToXyz);
  else
    apply_color_matrix(out.planes[0], out.planes[1], out.planes[2], xyz_to_rgb_matrix().m);
  return out;
}

void xyz_planes_to_rgb(Plane& x, Plane& y, Plane& z) {
  apply_color_matrix(x, y, z, xyz_to_rgb_matrix().m);
}

RasterImage negate(const RasterImage& img) {
  RasterImage out = img;
  for (auto& plane : out.planes)
    for (double& v : plane) v = 255.0 - v;
  return out;
}

std::vector<Plane> rescale_planes(const std::vector<const Plane*>& planes) {
  if (planes.empty()) fail_arg("rescale needs at least one plane");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const Plane* p : planes) {
    for (double v : *p) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  std::vector<Plane> out(planes.size());
  const double range = hi - lo;
  if (range < 1e-12) {
    for (std::size_t ch = 0; ch < planes.size(); ++ch) {
      out[ch].resize(planes[ch]->size());
      for (std::size_t i = 0; i < planes[ch]->size(); ++i)
        out[ch][i] = std::clamp((*planes[ch])[i], 0.0, 255.0);
    }
    return out;
  }
  const double scale = 255.0 / range;
  for (std::size_t ch = 0; ch < planes.size(); ++ch) {
    out[ch].resize(planes[ch]->size());
    for (std::size_t i = 0; i < planes[ch]->size(); ++i)
      out[ch][i] = ((*planes[ch])[i] - lo) * scale;
  }
  return out;
}

RasterImage rescale_to_8bit(const std::vector<const Plane*>& planes, int width, int height,
                            ColorModel model) {
  RasterImage out = RasterImage::create(width, height, static_cast<int>(planes.size()), model);
  out.planes = rescale_planes(planes);
  return out;
}

RasterImage rescale_to_8bit(const RealQImage& q) {
  return rescale_to_8bit({&q.r, &q.g, &q.b}, q.width, q.height);
}

std::vector<ChannelHistogram> histogram(const RasterImage& img) {
  std::vector<ChannelHistogram> out(img.channels());
  for (auto& h : out) h.fill(0);
  for (int ch = 0; ch < img.channels(); ++ch) {
    for (double v : img.planes[ch]) {
      int bin = static_cast<int>(std::floor(v));
      bin = std::clamp(bin, 0, 255);
      ++out[ch][bin];
    }
  }
  return out;
}

RasterImage downscale(const RasterImage& img, int max_side) {
  if (max_side <= 0 || (img.width <= max_side && img.height <= max_side)) return img;
  const double scale = static_cast<double>(max_side) / std::max(img.width, img.height);
  const int ow = std::max(1, static_cast<int>(std::lround(img.width * scale)));
  const int oh = std::max(1, static_cast<int>(std::lround(img.height * scale)));
  RasterImage out = RasterImage::create(ow, oh, img.channels(), img.model);
  const double xr = static_cast<double>(img.width) / ow;
  const double yr = static_cast<double>(img.height) / oh;
  for (int ch = 0; ch < img.channels(); ++ch) {
    for (int oy = 0; oy < oh; ++oy) {
      const double y0 = oy * yr, y1 = y0 + yr;
      for (int ox = 0; ox < ow; ++ox) {
        const double x0 = ox * xr, x1 = x0 + xr;
        double acc = 0.0, area = 0.0;
        for (int iy = static_cast<int>(std::floor(y0)); iy < static_cast<int>(std::ceil(y1));
             ++iy) {
          const double wy = std::min<double>(iy + 1, y1) - std::max<double>(iy, y0);
          if (wy <= 0 || iy >= img.height) continue;
          for (int ix = static_cast<int>(std::floor(x0)); ix < static_cast<int>(std::ceil(x1));
               ++ix) {
            const double wx = std::min<double>(ix + 1, x1) - std::max<double>(ix, x0);
            if (wx <= 0 || ix >= img.width) continue;
            acc += img.at(ch, ix, iy) * wx * wy;
            area += wx * wy;
          }
        }
        out.at(ch, ox, oy) = area > 0 ? acc / area : 0.0;
      }
    }
  }
  return out;
}

std::vector<std::uint8_t> quantize8(const RasterImage& img) {
  std::vector<std::uint8_t> out;
  out.reserve(img.pixel_count() * img.channels());
  const std::size_t n = img.pixel_count();
  for (std::size_t i = 0; i < n; ++i)
    for (int ch = 0; ch < img.channels(); ++ch)
      out.push_back(static_cast<std::uint8_t>(std::lround(std::clamp(img.planes[ch][i], 0.0, 255.0))));
  return out;
}

}  // namespace qalpha
