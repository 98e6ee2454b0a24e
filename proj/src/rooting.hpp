#pragma once

#include "spectral.hpp"

namespace qalpha {

// Coefficient magnitudes below this are treated as zero and map to zero.
inline constexpr double kZeroMagnitude = 1e-12;

// Enhancement parameters: 0 < alpha <= 1, beta >= 0, lambda > 0.
// log_base selects the logarithm used in the magnitude weight; 0 means the
// natural logarithm. Any base only rescales every coefficient by the same
// constant, so the rescaled 8-bit output is unchanged.
struct RootingParams {
  double alpha = 1.0;
  double beta = 0.0;
  double lambda = 1.0;
  double log_base = 0.0;
};

void validate(const RootingParams& params);

// Magnitude multiplier O(mag) = mag^(alpha-1) * log(mag^lambda + 1)^beta, so
// the new magnitude is O * mag. Zero magnitudes stay zero.
double rooting_coefficient(double mag, const RootingParams& params);

// Per-sample scaling by the real coefficient; the polar axis and phase of
// every coefficient are preserved exactly. Applied at all frequencies,
// including DC.
QuaternionSpectrum enhance_qspectrum(const QuaternionSpectrum& F, const RootingParams& params);

// Same contract with the complex modulus and argument.
ComplexPlane enhance_channel_spectrum(const ComplexPlane& F, const RootingParams& params);

}  // namespace qalpha
