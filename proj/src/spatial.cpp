#include "spatial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "error.hpp"

namespace qalpha {

namespace {
constexpr double kZeroModulus = 1e-12;
}

void validate(const PostTransform& post) {
  if (post.kind == PostKind::none || post.kind == PostKind::histeq) return;
  if (!(post.c > 0.0)) fail_arg("post transform scale c must be > 0");
  if (post.kind == PostKind::log && !(post.p > 0.0)) fail_arg("log exponent p must be > 0");
  if (post.kind == PostKind::gamma && !(post.gamma > 0.0)) fail_arg("gamma must be > 0");
}

Plane log_transform(const Plane& plane, double c, double p) {
  Plane out(plane.size());
  for (std::size_t i = 0; i < plane.size(); ++i) {
    const double r = std::max(plane[i], 0.0);
    out[i] = c * std::pow(std::log1p(r), p);
  }
  return out;
}

Plane gamma_transform(const Plane& plane, double c, double gamma) {
  Plane out(plane.size());
  for (std::size_t i = 0; i < plane.size(); ++i) {
    const double r = std::max(plane[i], 0.0);
    out[i] = c * std::pow(r, gamma);
  }
  return out;
}

RealQImage scale_by_modulus(const RealQImage& q,
                            const std::function<double(double)>& modulus_map) {
  RealQImage out = RealQImage::create(q.width, q.height);
  const std::size_t n = q.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    const double m = std::sqrt(q.e[i] * q.e[i] + q.r[i] * q.r[i] + q.g[i] * q.g[i] +
                               q.b[i] * q.b[i]);
    if (m < kZeroModulus) continue;
    const double factor = modulus_map(m) / m;
    out.e[i] = q.e[i] * factor;
    out.r[i] = q.r[i] * factor;
    out.g[i] = q.g[i] * factor;
    out.b[i] = q.b[i] * factor;
  }
  return out;
}

RealQImage apply_to_magnitude(const RealQImage& q, const PostTransform& post) {
  if (post.kind != PostKind::log && post.kind != PostKind::gamma)
    fail_arg("magnitude application supports log and gamma transforms");
  validate(post);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  const std::size_t n = q.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    const double m = std::sqrt(q.e[i] * q.e[i] + q.r[i] * q.r[i] + q.g[i] * q.g[i] +
                               q.b[i] * q.b[i]);
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  const double range = hi - lo;
  const auto normalize = [lo, range](double m) {
    return range > kZeroModulus ? (m - lo) * (255.0 / range) : 255.0;
  };
  if (post.kind == PostKind::log) {
    return scale_by_modulus(
        q, [&](double m) { return post.c * std::pow(std::log1p(normalize(m)), post.p); });
  }
  return scale_by_modulus(
      q, [&](double m) { return post.c * std::pow(normalize(m), post.gamma); });
}

RasterImage hist_equalize(const RasterImage& img) {
  RasterImage out = img;
  const std::size_t total = img.pixel_count();
  for (int ch = 0; ch < img.channels(); ++ch) {
    std::array<std::uint64_t, 256> counts{};
    for (double v : img.planes[ch]) {
      const int level = std::clamp(static_cast<int>(std::lround(v)), 0, 255);
      ++counts[level];
    }
    std::array<std::uint64_t, 256> cdf{};
    std::uint64_t running = 0;
    std::uint64_t cdf_min = 0;
    for (int k = 0; k < 256; ++k) {
      running += counts[k];
      cdf[k] = running;
      if (cdf_min == 0 && counts[k] > 0) cdf_min = cdf[k];
    }
    const std::uint64_t denom = total - cdf_min;
    std::array<double, 256> map{};
    for (int k = 0; k < 256; ++k) {
      if (denom == 0)
        map[k] = static_cast<double>(k);  // constant channel
      else
        map[k] = std::round(255.0 * static_cast<double>(cdf[k] - cdf_min) /
                            static_cast<double>(denom));
    }
    for (std::size_t i = 0; i < total; ++i) {
      const int level = std::clamp(static_cast<int>(std::lround(img.planes[ch][i])), 0, 255);
      out.planes[ch][i] = map[level];
    }
  }
  return out;
}

}  // namespace qalpha
