#include "spectral.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "error.hpp"
#include "parallel.hpp"

namespace qalpha {

namespace {

using cd = std::complex<double>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Iterative radix-2 FFT; kernel is exp(sign * i * 2*pi * n*k / len).
void fft_line_pow2(cd* a, std::size_t n, int sign) {
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j |= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * kTwoPi / static_cast<double>(len);
    const cd wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cd w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cd u = a[i + k];
        const cd v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// O(n^2) per-line transform for lengths that are not powers of two.
void dft_line_direct(cd* a, std::size_t n, int sign) {
  std::vector<cd> roots(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double ang = sign * kTwoPi * static_cast<double>(t) / static_cast<double>(n);
    roots[t] = cd(std::cos(ang), std::sin(ang));
  }
  std::vector<cd> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cd acc(0.0, 0.0);
    for (std::size_t t = 0; t < n; ++t) acc += a[t] * roots[(t * k) % n];
    out[k] = acc;
  }
  std::copy(out.begin(), out.end(), a);
}

void transform_line(cd* a, std::size_t n, int sign) {
  if (n <= 1) return;
  if (is_pow2(static_cast<int>(n)))
    fft_line_pow2(a, n, sign);
  else
    dft_line_direct(a, n, sign);
}

// Row-column 2-D transform, rows first. Row-major layout.
void fft2(std::vector<cd>& data, int w, int h, int sign) {
  parallel_for(static_cast<std::size_t>(h), [&](std::size_t begin, std::size_t end) {
    for (std::size_t y = begin; y < end; ++y)
      transform_line(data.data() + y * static_cast<std::size_t>(w), static_cast<std::size_t>(w),
                     sign);
  });
  parallel_for(static_cast<std::size_t>(w), [&](std::size_t begin, std::size_t end) {
    std::vector<cd> col(static_cast<std::size_t>(h));
    for (std::size_t x = begin; x < end; ++x) {
      for (int y = 0; y < h; ++y) col[y] = data[static_cast<std::size_t>(y) * w + x];
      transform_line(col.data(), col.size(), sign);
      for (int y = 0; y < h; ++y) data[static_cast<std::size_t>(y) * w + x] = col[y];
    }
  });
}

// Quaternion kernels as tables over t = (index * frequency) mod len.
std::vector<Quaternion> j_kernel_table(int len, int sign) {
  std::vector<Quaternion> t(len);
  for (int i = 0; i < len; ++i) {
    const double ang = sign * kTwoPi * i / len;
    t[i] = Quaternion(std::cos(ang), 0.0, std::sin(ang), 0.0);
  }
  return t;
}

std::vector<Quaternion> k_kernel_table(int len, int sign) {
  std::vector<Quaternion> t(len);
  for (int i = 0; i < len; ++i) {
    const double ang = sign * kTwoPi * i / len;
    t[i] = Quaternion(std::cos(ang), 0.0, 0.0, std::sin(ang));
  }
  return t;
}

// Literal double sum: F(p,s) = sum_n sum_m Wj(n,p) f(n,m) Wk(m,s), optionally
// scaled. Used for both directions (sign -1 forward, +1 inverse).
std::vector<Quaternion> two_side_direct(const std::vector<Quaternion>& in, int w, int h, int sign,
                                        double scale) {
  const std::vector<Quaternion> wj = j_kernel_table(w, sign);
  const std::vector<Quaternion> wk = k_kernel_table(h, sign);
  std::vector<Quaternion> out(in.size());
  parallel_for(static_cast<std::size_t>(h), [&](std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s) {
      for (int p = 0; p < w; ++p) {
        Quaternion acc{};
        for (int m = 0; m < h; ++m) {
          const std::size_t row = static_cast<std::size_t>(m) * w;
          const Quaternion& right = wk[(m * static_cast<int>(s)) % h];
          for (int n = 0; n < w; ++n)
            acc += qmul(qmul(wj[(n * p) % w], in[row + n]), right);
        }
        if (scale != 1.0) acc *= scale;
        out[s * static_cast<std::size_t>(w) + p] = acc;
      }
    }
  });
  return out;
}

// Fast path. Each real component plane gets a complex 2-D FFT with the same
// kernel sign; the quaternion spectrum is recombined from the even/odd parts
// of those transforms across the mirrored height frequency.
std::vector<Quaternion> two_side_fast(const std::vector<Quaternion>& in, int w, int h, int sign,
                                      double scale) {
  const std::size_t n = in.size();
  std::array<std::vector<cd>, 4> comp;
  for (auto& v : comp) v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    comp[0][i] = cd(in[i].a, 0.0);
    comp[1][i] = cd(in[i].b, 0.0);
    comp[2][i] = cd(in[i].c, 0.0);
    comp[3][i] = cd(in[i].d, 0.0);
  }
  parallel_for(4, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) fft2(comp[i], w, h, sign);
  });

  const double sg = static_cast<double>(sign);
  std::vector<Quaternion> out(n);
  for (int y = 0; y < h; ++y) {
    const int ym = (h - y) % h;
    for (int x = 0; x < w; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * w + x;
      const std::size_t mir = static_cast<std::size_t>(ym) * w + x;
      double cc[4], ss[4], sc[4], cs[4];
      for (int i = 0; i < 4; ++i) {
        const cd z = comp[i][idx];
        const cd zm = comp[i][mir];
        cc[i] = 0.5 * (z.real() + zm.real());
        ss[i] = 0.5 * (zm.real() - z.real());
        sc[i] = 0.5 * sg * (z.imag() + zm.imag());
        cs[i] = 0.5 * sg * (z.imag() - zm.imag());
      }
      Quaternion q(cc[0] + ss[1] - sg * sc[2] - sg * cs[3],
                   ss[0] + cc[1] + sg * cs[2] + sg * sc[3],
                   sg * sc[0] - sg * cs[1] + cc[2] - ss[3],
                   sg * cs[0] - sg * sc[1] - ss[2] + cc[3]);
      if (scale != 1.0) q *= scale;
      out[idx] = q;
    }
  }
  return out;
}

RealQImage planes_from_samples(const std::vector<Quaternion>& samples, int w, int h) {
  RealQImage out = RealQImage::create(w, h);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out.e[i] = samples[i].a;
    out.r[i] = samples[i].b;
    out.g[i] = samples[i].c;
    out.b[i] = samples[i].d;
  }
  return out;
}

}  // namespace

QuaternionSpectrum QuaternionSpectrum::create(int width, int height) {
  if (width <= 0 || height <= 0) fail_arg("spectrum dimensions must be positive");
  QuaternionSpectrum s;
  s.width = width;
  s.height = height;
  s.samples.assign(static_cast<std::size_t>(width) * height, Quaternion{});
  return s;
}

ComplexPlane ComplexPlane::create(int width, int height) {
  if (width <= 0 || height <= 0) fail_arg("spectrum dimensions must be positive");
  ComplexPlane p;
  p.width = width;
  p.height = height;
  p.samples.assign(static_cast<std::size_t>(width) * height, cd(0.0, 0.0));
  return p;
}

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

QuaternionSpectrum qdft_direct(const QuaternionImage& f) {
  QuaternionSpectrum F = QuaternionSpectrum::create(f.width, f.height);
  F.samples = two_side_direct(f.samples, f.width, f.height, -1, 1.0);
  return F;
}

RealQImage qdft_inverse_direct(const QuaternionSpectrum& F) {
  const double scale = 1.0 / (static_cast<double>(F.width) * F.height);
  return planes_from_samples(two_side_direct(F.samples, F.width, F.height, +1, scale), F.width,
                             F.height);
}

QuaternionSpectrum qdft_forward(const QuaternionImage& f) {
  if (!is_pow2(f.width) || !is_pow2(f.height)) return qdft_direct(f);
  QuaternionSpectrum F = QuaternionSpectrum::create(f.width, f.height);
  F.samples = two_side_fast(f.samples, f.width, f.height, -1, 1.0);
  return F;
}

RealQImage qdft_inverse(const QuaternionSpectrum& F) {
  if (!is_pow2(F.width) || !is_pow2(F.height)) return qdft_inverse_direct(F);
  const double scale = 1.0 / (static_cast<double>(F.width) * F.height);
  return planes_from_samples(two_side_fast(F.samples, F.width, F.height, +1, scale), F.width,
                             F.height);
}

ComplexPlane dft2_forward(const Plane& plane, int width, int height) {
  if (static_cast<std::size_t>(width) * height != plane.size())
    fail_arg("plane size does not match the stated dimensions");
  ComplexPlane F = ComplexPlane::create(width, height);
  for (std::size_t i = 0; i < plane.size(); ++i) F.samples[i] = cd(plane[i], 0.0);
  fft2(F.samples, width, height, -1);
  return F;
}

Plane dft2_inverse(const ComplexPlane& F, double* max_imag_residue) {
  std::vector<cd> data = F.samples;
  fft2(data, F.width, F.height, +1);
  const double scale = 1.0 / (static_cast<double>(F.width) * F.height);
  Plane out(data.size());
  double residue = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const cd v = data[i] * scale;
    out[i] = v.real();
    residue = std::max(residue, std::abs(v.imag()));
  }
  if (max_imag_residue) *max_imag_residue = residue;
  return out;
}

}  // namespace qalpha
