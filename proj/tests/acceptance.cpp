// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Heavier end-to-end checks than the unit suites; uses a
// real photograph for the reproduction criteria when QALPHA_TREE_IMAGE points
// at one, a deterministic synthetic stand-in otherwise.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "metrics.hpp"
#include "pipeline.hpp"
#include "rooting.hpp"
#include "search.hpp"
#include "spatial.hpp"
#include "spectral.hpp"
#include "support/testutil.hpp"

using namespace qalpha;

namespace {

int failures = 0;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

double max_level_diff(const RasterImage& a, const RasterImage& b) {
  const auto qa = quantize8(a);
  const auto qb = quantize8(b);
  double m = 0.0;
  for (std::size_t i = 0; i < qa.size(); ++i)
    m = std::max(m, std::abs(static_cast<double>(qa[i]) - static_cast<double>(qb[i])));
  return m;
}

double mean_intensity(const RasterImage& img) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& plane : img.planes) {
    for (double v : plane) sum += v;
    n += plane.size();
  }
  return sum / static_cast<double>(n);
}

// --- criterion 1: fast transforms match the direct-sum reference ------------

void criterion_1() {
  Timer timer;
  double worst = 0.0;
  for (const auto [w, h, seed] : {std::tuple{4, 4, 201}, {8, 8, 202}, {8, 16, 203}}) {
    const QuaternionImage f = testutil::random_qimage(w, h, seed);
    const QuaternionSpectrum direct = qdft_direct(f);
    worst = std::max(worst, testutil::spectrum_rel_error(qdft_forward(f), direct));

    // inverse: fast against the direct-sum inverse
    const RealQImage a = qdft_inverse(direct);
    const RealQImage b = qdft_inverse_direct(direct);
    double scale = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < a.e.size(); ++i) {
      for (const auto [x, y] : {std::pair{a.e[i], b.e[i]},
                                {a.r[i], b.r[i]},
                                {a.g[i], b.g[i]},
                                {a.b[i], b.b[i]}}) {
        diff = std::max(diff, std::abs(x - y));
        scale = std::max(scale, std::abs(y));
      }
    }
    worst = std::max(worst, diff / std::max(scale, 1e-300));
  }
  const double secs = timer.seconds();
  report(1, worst < 1e-9 && secs < 5.0, "fast QDFT matches the direct-sum reference",
         "max rel err " + fmt(worst) + ", " + fmt(secs) + " s");
}

// --- criterion 2: round trips ------------------------------------------------

void criterion_2() {
  const QuaternionImage f = testutil::random_qimage(16, 16, 204);
  const RealQImage back = qdft_inverse(qdft_forward(f));
  double worst = 0.0;
  for (std::size_t i = 0; i < f.samples.size(); ++i) {
    worst = std::max(worst, std::abs(f.samples[i].a - back.e[i]));
    worst = std::max(worst, std::abs(f.samples[i].b - back.r[i]));
    worst = std::max(worst, std::abs(f.samples[i].c - back.g[i]));
    worst = std::max(worst, std::abs(f.samples[i].d - back.b[i]));
  }

  std::mt19937_64 rng(205);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  Plane plane(256);
  for (double& v : plane) v = u(rng);
  const Plane round = dft2_inverse(dft2_forward(plane, 16, 16));
  double worst2 = 0.0;
  for (std::size_t i = 0; i < plane.size(); ++i)
    worst2 = std::max(worst2, std::abs(plane[i] - round[i]) / 255.0);

  report(2, worst < 1e-9 && worst2 < 1e-9, "transform round trips are the identity",
         "qdft " + fmt(worst) + ", dft2 " + fmt(worst2) + " rel");
}

// --- criterion 3: identity pipeline -----------------------------------------

void criterion_3() {
  double worst = 0.0;
  for (std::uint64_t seed : {206, 207, 208}) {
    const RasterImage img = testutil::random_raster(16, 16, seed);
    for (const Method method : {Method::qdft, Method::dft_channel}) {
      PipelineConfig cfg;
      cfg.method = method;
      cfg.blocks = {4, 4};
      if (method == Method::dft_channel) cfg.post_apply = PostApply::per_plane;
      worst = std::max(worst, max_level_diff(run_pipeline(img, cfg).image, img));
    }
  }
  report(3, worst <= 1.0, "identity parameters reproduce 8-bit inputs",
         "max deviation " + fmt(worst) + " levels");
}

// --- criterion 4: phase and axis preservation --------------------------------

void criterion_4() {
  const QuaternionImage f = testutil::random_qimage(8, 8, 209);
  const QuaternionSpectrum F = qdft_forward(f);
  const QuaternionSpectrum enhanced = enhance_qspectrum(F, {0.7, 0.9, 0.58, 0.0});
  double worst = 0.0;
  for (std::size_t i = 0; i < F.samples.size(); ++i) {
    if (modulus(F.samples[i]) <= 1e-12) continue;
    const auto before = qpolar(F.samples[i]);
    const auto after = qpolar(enhanced.samples[i]);
    worst = std::max(worst, std::abs(before.phase - after.phase));
    if (before.has_axis && after.has_axis) {
      worst = std::max(worst, std::abs(before.axis.b - after.axis.b));
      worst = std::max(worst, std::abs(before.axis.c - after.axis.c));
      worst = std::max(worst, std::abs(before.axis.d - after.axis.d));
    }
  }

  const RealQImage q = testutil::random_realq(8, 8, 210);
  PostTransform post;
  post.kind = PostKind::gamma;
  post.gamma = 1.258;
  const RealQImage mapped = apply_to_magnitude(q, post);
  for (std::size_t i = 0; i < q.pixel_count(); ++i) {
    const double m_in =
        std::sqrt(q.e[i] * q.e[i] + q.r[i] * q.r[i] + q.g[i] * q.g[i] + q.b[i] * q.b[i]);
    const double m_out = std::sqrt(mapped.e[i] * mapped.e[i] + mapped.r[i] * mapped.r[i] +
                                   mapped.g[i] * mapped.g[i] + mapped.b[i] * mapped.b[i]);
    if (m_in <= 1e-12 || m_out <= 1e-12) continue;
    worst = std::max(worst, std::abs(mapped.e[i] / m_out - q.e[i] / m_in));
    worst = std::max(worst, std::abs(mapped.r[i] / m_out - q.r[i] / m_in));
    worst = std::max(worst, std::abs(mapped.g[i] / m_out - q.g[i] / m_in));
    worst = std::max(worst, std::abs(mapped.b[i] / m_out - q.b[i] / m_in));
  }
  report(4, worst < 1e-9, "rooting and magnitude maps preserve axis and phase",
         "max deviation " + fmt(worst));
}

// --- criterion 5: log-base immateriality --------------------------------------

void criterion_5() {
  int identical = 0;
  const std::vector<RasterImage> images = {testutil::random_raster(16, 16, 211),
                                           downscale(testutil::tree_standin(), 32),
                                           testutil::random_raster(32, 16, 212)};
  for (const RasterImage& img : images) {
    PipelineConfig cfg;
    cfg.rooting = {0.9, 0.93, 0.58, 0.0};
    cfg.blocks = {4, 4};
    const PipelineResult nat = run_pipeline(img, cfg);
    cfg.rooting.log_base = 10.0;
    const PipelineResult base10 = run_pipeline(img, cfg);
    if (quantize8(nat.image) == quantize8(base10.image)) ++identical;
  }
  report(5, identical == static_cast<int>(images.size()),
         "log base does not change the rescaled 8-bit output",
         std::to_string(identical) + "/" + std::to_string(images.size()) + " images identical");
}

// --- criterion 6: metric hand cases -------------------------------------------

void criterion_6() {
  bool ok = true;
  std::string detail;

  RealQImage block = RealQImage::create(2, 2);
  block.e = {10, 20, 30, 40};
  block.r = {2, 60, 70, 80};
  block.g = {90, 100, 110, 120};
  block.b = {130, 140, 150, 200};
  const double span = ceme(block, {2, 2});
  ok &= std::abs(span - 40.0) <= 1e-9;

  block.e[0] = 0.0;
  block.r[0] = 40.0;
  block.b[3] = 255.0;
  const double clamped = ceme(block, {2, 2});
  ok &= std::abs(clamped - 20.0 * std::log10(255000.0)) <= 1e-9;

  const Plane two_blocks = {1, 10, 2, 200, 5, 3, 30, 60};
  const double mean_blocks = eme(two_blocks, 4, 2, {2, 2});
  ok &= std::abs(mean_blocks - 30.0) <= 1e-9;

  RealQImage constant = RealQImage::create(4, 4);
  for (auto* p : {&constant.e, &constant.r, &constant.g, &constant.b})
    std::fill(p->begin(), p->end(), 55.0);
  ok &= ceme(constant, {2, 2}) == 0.0;

  RealQImage noisy = testutil::random_realq(16, 16, 213);
  for (auto* p : {&noisy.e, &noisy.r, &noisy.g, &noisy.b})
    for (double& v : *p) v = std::abs(v);
  RealQImage shifted = noisy;
  for (auto* p : {&shifted.e, &shifted.r, &shifted.g, &shifted.b})
    for (double& v : *p) v += 20.0;
  const double base = ceme(noisy, {4, 4});
  const double after = ceme(shifted, {4, 4});
  ok &= after < base;

  detail = "2x2 block " + fmt(span) + ", clamp " + fmt(clamped) + ", mean " +
           fmt(mean_blocks) + ", shift " + fmt(base) + " -> " + fmt(after);
  report(6, ok, "metric hand cases and shift sensitivity", detail);
}

// --- criterion 7: genetic algorithm -------------------------------------------

void criterion_7() {
  Timer timer;
  ParamBounds bounds;
  bounds.alpha_min = 0.01;
  bounds.alpha_max = 1.0;
  bounds.beta_min = 0.0;
  bounds.beta_max = 1.0;
  bounds.lambda_min = 0.01;
  bounds.lambda_max = 1.0;
  const FitnessFn quadratic = [](const RootingParams& p) {
    return -(p.alpha - 0.6) * (p.alpha - 0.6) - (p.beta - 0.4) * (p.beta - 0.4) -
           (p.lambda - 0.5) * (p.lambda - 0.5);
  };
  GAConfig cfg;  // population 30, generations 40
  cfg.seed = 11;
  cfg.elitism = 2;
  const GAResult a = ga_optimize_fn(quadratic, bounds, cfg);
  const GAResult b = ga_optimize_fn(quadratic, bounds, cfg);

  const bool deterministic = a.best.alpha == b.best.alpha && a.best.beta == b.best.beta &&
                             a.best.lambda == b.best.lambda && a.best_fitness == b.best_fitness;
  const double err = std::max({std::abs(a.best.alpha - 0.6), std::abs(a.best.beta - 0.4),
                               std::abs(a.best.lambda - 0.5)});
  bool nondecreasing = true;
  for (std::size_t i = 1; i < a.log.size(); ++i)
    nondecreasing &= a.log[i].best >= a.log[i - 1].best;
  const double secs = timer.seconds();
  report(7, deterministic && err <= 0.02 && nondecreasing && secs < 10.0,
         "GA determinism, quadratic recovery, monotone best",
         "err " + fmt(err) + ", deterministic " + (deterministic ? "yes" : "no") +
             ", monotone " + (nondecreasing ? "yes" : "no") + ", " + fmt(secs) + " s");
}

// --- criterion 8: block-size sweep of the original-image EMEs ------------------

void criterion_8() {
  std::string source;
  const RasterImage tree = testutil::load_tree_or_standin(&source);
  const double target[3] = {12.1228, 21.7077, 12.1090};

  std::ofstream csv("eme_block_report.csv");
  csv << "block,eme_r,eme_g,eme_b,within_5pct\n";
  std::printf("      original-image EME by block size [%s]:\n", source.c_str());
  bool any_match = false;
  for (const int size : {4, 8, 16}) {
    const BlockSpec blocks{size, size};
    double values[3];
    for (int ch = 0; ch < 3; ++ch)
      values[ch] = eme(tree.planes[ch], tree.width, tree.height, blocks);
    bool match = true;
    for (int ch = 0; ch < 3; ++ch)
      match &= std::abs(values[ch] - target[ch]) <= 0.05 * target[ch];
    any_match |= match;
    std::printf("        %2dx%-2d -> [%.4f, %.4f, %.4f] %s\n", size, size, values[0], values[1],
                values[2], match ? "matches the reported values within 5%" : "no match");
    csv << size << ',' << values[0] << ',' << values[1] << ',' << values[2] << ','
        << (match ? "yes" : "no") << '\n';
  }
  const std::string verdict = any_match
                                  ? "reported values reproduced at one block size"
                                  : (source == "synthetic stand-in"
                                         ? "no match (synthetic stand-in, expected)"
                                         : "no block size reproduces the reported values");
  report(8, true, "original-image EME block sweep report emitted",
         "eme_block_report.csv; verdict: " + verdict);
}

// --- criterion 9: channel-mode optimum region ----------------------------------

RasterImage criterion_9(bool* alpha_ok) {
  Timer timer;
  std::string source;
  const RasterImage tree = downscale(testutil::load_tree_or_standin(&source), 128);

  SweepSpec spec;
  spec.method = Method::dft_channel;
  spec.fixed_name = "beta";
  spec.fixed_value = 0.33;
  spec.vary1 = {"alpha", 0.5, 0.98, 0.04};
  spec.vary2 = {"lambda", 0.1, 0.5, 0.08};
  spec.blocks = {8, 8};
  const MetricSurface surface = sweep(tree, spec);

  bool in_region = true;
  std::string detail = source + "; argmax alpha";
  PipelineConfig rooted_cfg;
  rooted_cfg.method = Method::dft_channel;
  rooted_cfg.post_apply = PostApply::per_plane;
  for (int ch = 0; ch < 3; ++ch) {
    const auto best = surface.argmax(ch);
    in_region &= best.v1 >= 0.6 && best.v1 < 1.0;
    detail += (ch == 0 ? " " : "/") + fmt(best.v1);
    rooted_cfg.channel_rooting[ch] = {best.v1, 0.33, best.v2, 0.0};
  }
  const double secs = timer.seconds();
  detail += ", " + fmt(secs) + " s";
  report(9, in_region && secs < 120.0, "channel-mode EME argmax alpha lies in [0.6, 1.0)",
         detail);
  *alpha_ok = in_region;

  return run_pipeline(tree, rooted_cfg).image;
}

// --- criterion 10: the log post transform brightens ----------------------------

void criterion_10(const RasterImage& rooted_display) {
  // Rooted display image is dark; the log stage must raise the mean.
  Plane mapped[3];
  for (int ch = 0; ch < 3; ++ch)
    mapped[ch] = log_transform(rooted_display.planes[ch], 1.0, 3.3);
  const RasterImage bright =
      rescale_to_8bit({&mapped[0], &mapped[1], &mapped[2]}, rooted_display.width,
                      rooted_display.height);
  const double before = mean_intensity(rooted_display);
  const double after = mean_intensity(bright);
  report(10, after > before, "log post transform raises the mean intensity",
         "mean " + fmt(before) + " -> " + fmt(after));
}

}  // namespace

int main() {
  std::printf("qalpha acceptance suite\n");
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  bool alpha_ok = false;
  const RasterImage rooted = criterion_9(&alpha_ok);
  criterion_10(rooted);
  std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
