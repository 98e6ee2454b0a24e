#pragma once

#include <functional>

#include "image.hpp"

namespace qalpha {

enum class PostKind { none, log, gamma, histeq };

// Post-enhancement intensity transform. c scales, p is the log exponent and
// gamma the power-law exponent; each is read only by its kind.
struct PostTransform {
  PostKind kind = PostKind::none;
  double c = 1.0;
  double p = 1.0;
  double gamma = 1.0;
};

void validate(const PostTransform& post);

// s = c * ln(1 + r)^p per sample, r >= 0. Callers rescale the result.
Plane log_transform(const Plane& plane, double c, double p);

// s = c * r^gamma per sample.
Plane gamma_transform(const Plane& plane, double c, double gamma);

// Magnitude map: every output quaternion is the input scaled along its own
// direction, q_out = m_out * q_in / m_in, so axis and phase never change.
// modulus_map receives the raw modulus; pixels with modulus below 1e-12
// output zero.
RealQImage scale_by_modulus(const RealQImage& q, const std::function<double(double)>& modulus_map);

// Applies a log/gamma transform to the quaternion modulus. Moduli are mapped
// onto the display range [0, 255] by their min-max before the scalar
// transform, matching the per-plane behaviour of the pipeline.
RealQImage apply_to_magnitude(const RealQImage& q, const PostTransform& post);

// Per-channel cumulative-distribution equalization onto [0, 255]. Constant
// channels stay constant.
RasterImage hist_equalize(const RasterImage& img);

}  // namespace qalpha
