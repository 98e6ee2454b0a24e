#include <cmath>

#include "doctest.h"
#include "error.hpp"
#include "metrics.hpp"
#include "parallel.hpp"
#include "support/testutil.hpp"

using qalpha::BlockSpec;
using qalpha::ceme;
using qalpha::eme;
using qalpha::Plane;
using qalpha::RealQImage;

TEST_SUITE_BEGIN("metrics");

TEST_CASE("constant image scores zero") {
  RealQImage q = RealQImage::create(4, 4);
  for (auto* p : {&q.e, &q.r, &q.g, &q.b}) std::fill(p->begin(), p->end(), 42.0);
  CHECK(ceme(q, {2, 2}) == doctest::Approx(0.0));
  CHECK(eme(q.r, 4, 4, {2, 2}) == doctest::Approx(0.0));
}

TEST_CASE("single block spanning 2 to 200 scores 40") {
  RealQImage q = RealQImage::create(2, 2);
  q.e = {10, 20, 30, 40};
  q.r = {2, 60, 70, 80};  // global min 2
  q.g = {90, 100, 110, 120};
  q.b = {130, 140, 150, 200};  // global max 200
  CHECK(ceme(q, {2, 2}) == doctest::Approx(40.0).epsilon(1e-9));
}

TEST_CASE("a zero in the block clamps the minimum") {
  RealQImage q = RealQImage::create(2, 2);
  q.e = {0, 10, 20, 30};
  q.r = {40, 50, 60, 70};
  q.g = {80, 90, 100, 110};
  q.b = {120, 130, 140, 255};
  CHECK(ceme(q, {2, 2}) == doctest::Approx(20.0 * std::log10(255000.0)).epsilon(1e-12));
}

TEST_CASE("eme of two blocks averages the block scores") {
  // Two 2x2 blocks side by side with max/min ratios 10 and 100.
  const Plane plane = {1, 10, 2, 200, 5, 3, 30, 60};
  CHECK(eme(plane, 4, 2, {2, 2}) == doctest::Approx(30.0).epsilon(1e-9));
}

TEST_CASE("eme equals ceme when all four planes coincide") {
  const RealQImage rnd = testutil::random_realq(16, 16, 61);
  RealQImage quad = RealQImage::create(16, 16);
  quad.e = quad.r = quad.g = quad.b = rnd.r;
  CHECK(ceme(quad, {8, 8}) == doctest::Approx(eme(rnd.r, 16, 16, {8, 8})).epsilon(1e-12));
}

TEST_CASE("metrics are nonnegative") {
  const RealQImage q = testutil::random_realq(16, 16, 62);
  CHECK(ceme(q, {4, 4}) >= 0.0);
  RealQImage dark = RealQImage::create(8, 8);  // all zeros
  CHECK(ceme(dark, {4, 4}) == doctest::Approx(0.0));
}

TEST_CASE("adding a constant compresses the measure") {
  RealQImage q = testutil::random_realq(16, 16, 63);
  for (auto* p : {&q.e, &q.r, &q.g, &q.b})
    for (double& v : *p) v = std::abs(v);
  RealQImage shifted = q;
  for (auto* p : {&shifted.e, &shifted.r, &shifted.g, &shifted.b})
    for (double& v : *p) v += 20.0;
  CHECK(ceme(shifted, {4, 4}) < ceme(q, {4, 4}));
  CHECK(eme(shifted.r, 16, 16, {4, 4}) < eme(q.r, 16, 16, {4, 4}));
}

TEST_CASE("incomplete edge blocks are discarded") {
  // A 5x5 image with 2x2 blocks uses only the 4x4 corner.
  RealQImage big = RealQImage::create(5, 5);
  RealQImage crop = RealQImage::create(4, 4);
  const auto fill = [](RealQImage& img, double edge) {
    std::size_t i = 0;
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x, ++i) {
        const double v = 10.0 + 3.0 * x + 7.0 * y;
        img.e[i] = img.r[i] = img.g[i] = img.b[i] =
            (x >= 4 || y >= 4) ? edge : v;
      }
  };
  fill(big, 1e6);  // extreme values in the discarded margin
  fill(crop, 0.0);
  CHECK(ceme(big, {2, 2}) == doctest::Approx(ceme(crop, {2, 2})).epsilon(1e-12));
}

TEST_CASE("images smaller than one block are rejected") {
  const RealQImage q = testutil::random_realq(4, 4, 64);
  CHECK_THROWS_AS(ceme(q, {8, 8}), qalpha::Error);
  CHECK_THROWS_AS(eme(q.r, 4, 4, {5, 2}), qalpha::Error);
  CHECK_THROWS_AS(ceme(q, {0, 2}), qalpha::Error);
}

TEST_CASE("value is independent of the thread count") {
  const RealQImage q = testutil::random_realq(64, 64, 65);
  qalpha::set_max_threads(1);
  const double serial = ceme(q, {8, 8});
  qalpha::set_max_threads(8);
  const double parallel = ceme(q, {8, 8});
  qalpha::set_max_threads(0);
  CHECK(serial == parallel);
}

TEST_SUITE_END();
