#include <cmath>
#include <random>

#include "doctest.h"
#include "error.hpp"
#include "rooting.hpp"
#include "support/testutil.hpp"

using qalpha::ComplexPlane;
using qalpha::dft2_forward;
using qalpha::dft2_inverse;
using qalpha::enhance_channel_spectrum;
using qalpha::enhance_qspectrum;
using qalpha::Plane;
using qalpha::qpolar;
using qalpha::Quaternion;
using qalpha::QuaternionSpectrum;
using qalpha::rooting_coefficient;
using qalpha::RootingParams;

TEST_SUITE_BEGIN("rooting");

TEST_CASE("identity parameters give the identity multiplier") {
  const RootingParams id{1.0, 0.0, 1.0, 0.0};
  for (double mag : {0.5, 1.0, 7.0, 1234.5}) CHECK(rooting_coefficient(mag, id) == 1.0);
}

TEST_CASE("unit coefficient at mag = e - 1 with alpha=beta=lambda=1") {
  const RootingParams p{1.0, 1.0, 1.0, 0.0};
  CHECK(rooting_coefficient(std::exp(1.0) - 1.0, p) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero magnitude maps to zero") {
  const RootingParams p{0.5, 1.0, 0.7, 0.0};
  CHECK(rooting_coefficient(0.0, p) == 0.0);
  CHECK(rooting_coefficient(1e-13, p) == 0.0);
}

TEST_CASE("log base scales every coefficient by the same constant") {
  const RootingParams nat{0.8, 0.9, 0.58, 0.0};
  RootingParams base10 = nat;
  base10.log_base = 10.0;
  const double factor = std::pow(std::log(10.0), -nat.beta);
  for (double mag : {0.3, 2.0, 55.0, 4096.0}) {
    const double a = rooting_coefficient(mag, base10);
    const double b = rooting_coefficient(mag, nat) * factor;
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)));
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(qalpha::validate(RootingParams{0.0, 0.0, 1.0, 0.0}), qalpha::Error);
  CHECK_THROWS_AS(qalpha::validate(RootingParams{1.2, 0.0, 1.0, 0.0}), qalpha::Error);
  CHECK_THROWS_AS(qalpha::validate(RootingParams{0.5, -0.1, 1.0, 0.0}), qalpha::Error);
  CHECK_THROWS_AS(qalpha::validate(RootingParams{0.5, 0.0, 0.0, 0.0}), qalpha::Error);
  CHECK_THROWS_AS(qalpha::validate(RootingParams{0.5, 0.0, 1.0, 1.0}), qalpha::Error);
  CHECK_NOTHROW(qalpha::validate(RootingParams{1.0, 0.0, 1.0, 0.0}));
}

TEST_CASE("identity parameters leave the spectrum untouched") {
  const auto f = testutil::random_qimage(8, 8, 41);
  const QuaternionSpectrum F = qdft_forward(f);
  const QuaternionSpectrum out = enhance_qspectrum(F, {1.0, 0.0, 1.0, 0.0});
  for (std::size_t i = 0; i < F.samples.size(); ++i) CHECK(out.samples[i] == F.samples[i]);
}

TEST_CASE("plain alpha-rooting of a single coefficient") {
  QuaternionSpectrum F = QuaternionSpectrum::create(4, 4);
  const Quaternion q = Quaternion{2.0, 2.0, 2.0, 2.0};  // |q| = 4
  F.at(1, 1) = q;
  const QuaternionSpectrum out = enhance_qspectrum(F, {0.5, 0.0, 1.0, 0.0});
  const Quaternion want = q * std::pow(4.0, -0.5);  // q / 2
  CHECK(modulus(out.at(1, 1) - want) <= 1e-12);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x)
      if (x != 1 || y != 1) CHECK(out.at(x, y) == Quaternion{});
}

TEST_CASE("axis and phase survive the enhancement") {
  const auto f = testutil::random_qimage(8, 8, 42);
  const QuaternionSpectrum F = qdft_forward(f);
  const QuaternionSpectrum out = enhance_qspectrum(F, {0.7, 0.5, 0.58, 0.0});
  for (std::size_t i = 0; i < F.samples.size(); ++i) {
    if (modulus(F.samples[i]) <= 1e-12) continue;
    const auto before = qpolar(F.samples[i]);
    const auto after = qpolar(out.samples[i]);
    REQUIRE(before.has_axis == after.has_axis);
    CHECK(std::abs(before.phase - after.phase) <= 1e-9);
    if (before.has_axis) {
      CHECK(std::abs(before.axis.b - after.axis.b) <= 1e-9);
      CHECK(std::abs(before.axis.c - after.axis.c) <= 1e-9);
      CHECK(std::abs(before.axis.d - after.axis.d) <= 1e-9);
    }
  }
}

TEST_CASE("output magnitude is nondecreasing in the input magnitude") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> ua(0.05, 1.0), ub(0.0, 3.0), ul(0.05, 3.0);
  for (int trial = 0; trial < 25; ++trial) {
    const RootingParams p{ua(rng), ub(rng), ul(rng), 0.0};
    double prev = 0.0;
    for (double mag = 0.0; mag <= 300.0; mag += 1.37) {
      const double out = rooting_coefficient(mag, p) * mag;
      CHECK(out >= prev - 1e-12 * std::max(1.0, prev));
      prev = out;
    }
  }
}

TEST_CASE("channel enhancement keeps the argument and scales the modulus") {
  ComplexPlane F = ComplexPlane::create(2, 2);
  F.samples[0] = {30.0, 40.0};  // |F| = 50
  const RootingParams p{0.9, 0.0, 1.0, 0.0};
  const ComplexPlane out = enhance_channel_spectrum(F, p);
  CHECK(std::arg(out.samples[0]) == doctest::Approx(std::arg(F.samples[0])).epsilon(1e-12));
  CHECK(std::abs(out.samples[0]) == doctest::Approx(std::pow(50.0, 0.9)).epsilon(1e-12));
  for (std::size_t i = 1; i < out.samples.size(); ++i) CHECK(out.samples[i] == F.samples[i] * 0.0);
}

TEST_CASE("identity parameters leave channel spectra untouched") {
  Plane plane(16);
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  for (double& v : plane) v = u(rng);
  const ComplexPlane F = dft2_forward(plane, 4, 4);
  const ComplexPlane out = enhance_channel_spectrum(F, {1.0, 0.0, 1.0, 0.0});
  for (std::size_t i = 0; i < F.samples.size(); ++i) CHECK(out.samples[i] == F.samples[i]);
}

TEST_CASE("real input stays real through rooted channel spectra") {
  // Conjugate symmetry is preserved because the multiplier depends only on
  // the modulus; the inverse must come back real.
  Plane plane(16);
  std::mt19937_64 rng(45);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  for (double& v : plane) v = u(rng);
  ComplexPlane F = dft2_forward(plane, 4, 4);
  F = enhance_channel_spectrum(F, {0.6, 0.8, 0.4, 0.0});
  double residue = 0.0;
  dft2_inverse(F, &residue);
  CHECK(residue <= 1e-9 * 255.0 * 16);
}

TEST_SUITE_END();
