#include "rooting.hpp"

#include <cmath>

#include "error.hpp"

namespace qalpha {

void validate(const RootingParams& params) {
  if (!(params.alpha > 0.0 && params.alpha <= 1.0))
    fail_arg("alpha must lie in (0, 1]");
  if (!(params.beta >= 0.0)) fail_arg("beta must be >= 0");
  if (!(params.lambda > 0.0)) fail_arg("lambda must be > 0");
  if (params.log_base != 0.0 && !(params.log_base > 0.0 && params.log_base != 1.0))
    fail_arg("log base must be positive and != 1");
}

double rooting_coefficient(double mag, const RootingParams& params) {
  if (mag < kZeroMagnitude) return 0.0;
  double logterm = std::log1p(std::pow(mag, params.lambda));
  if (params.log_base != 0.0) logterm /= std::log(params.log_base);
  return std::pow(mag, params.alpha - 1.0) * std::pow(logterm, params.beta);
}

QuaternionSpectrum enhance_qspectrum(const QuaternionSpectrum& F, const RootingParams& params) {
  QuaternionSpectrum out = F;
  for (Quaternion& q : out.samples) {
    const double coeff = rooting_coefficient(modulus(q), params);
    q *= coeff;
  }
  return out;
}

ComplexPlane enhance_channel_spectrum(const ComplexPlane& F, const RootingParams& params) {
  ComplexPlane out = F;
  for (std::complex<double>& z : out.samples) {
    const double coeff = rooting_coefficient(std::abs(z), params);
    z *= coeff;
  }
  return out;
}

}  // namespace qalpha
