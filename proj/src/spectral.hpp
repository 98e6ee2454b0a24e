#pragma once

#include <complex>
#include <vector>

#include "image.hpp"

namespace qalpha {

struct QuaternionSpectrum {
  int width = 0;
  int height = 0;
  std::vector<Quaternion> samples;  // row-major

  static QuaternionSpectrum create(int width, int height);
  Quaternion& at(int x, int y) { return samples[static_cast<std::size_t>(y) * width + x]; }
  const Quaternion& at(int x, int y) const {
    return samples[static_cast<std::size_t>(y) * width + x];
  }
};

struct ComplexPlane {
  int width = 0;
  int height = 0;
  std::vector<std::complex<double>> samples;  // row-major

  static ComplexPlane create(int width, int height);
};

bool is_pow2(int n);
int next_pow2(int n);

// Two-side transform conventions used throughout:
//   - the unit-j kernel multiplies on the LEFT and runs along the width axis
//     (index n, frequency p, length N = width);
//   - the unit-k kernel multiplies on the RIGHT and runs along the height axis
//     (index m, frequency s, length M = height);
//   - forward kernels carry exponent -2*pi*(..)/len, the inverse flips the
//     sign and divides by N*M.

// Literal O(N^2 M^2) evaluation of the double sum. This is the reference
// path: the fast transform is defined as whatever matches it.
QuaternionSpectrum qdft_direct(const QuaternionImage& f);
RealQImage qdft_inverse_direct(const QuaternionSpectrum& F);

// Fast path for power-of-two sizes (four complex row-column FFTs and an
// O(NM) recombination); other sizes fall back to the direct evaluation.
QuaternionSpectrum qdft_forward(const QuaternionImage& f);
RealQImage qdft_inverse(const QuaternionSpectrum& F);

// Standard complex 2-D DFT of one real plane. Any size is accepted:
// power-of-two lines use the FFT, other lengths a direct per-line sum.
ComplexPlane dft2_forward(const Plane& plane, int width, int height);
// Inverse with 1/(NM); returns the real part. When max_imag_residue is given
// it receives the largest |imaginary| component seen before discarding.
Plane dft2_inverse(const ComplexPlane& F, double* max_imag_residue = nullptr);

}  // namespace qalpha
