#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pipeline.hpp"

namespace qalpha {

struct SweepAxis {
  std::string name;  // alpha | beta | lambda
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;

  int count() const;
  double value(int i) const { return start + i * step; }
};

struct SweepSpec {
  std::string fixed_name;
  double fixed_value = 0.0;
  SweepAxis vary1, vary2;
  Method method = Method::qdft;
  EvenMode even_mode = EvenMode::zero;
  BlockSpec blocks{};
  double log_base = 0.0;
};

// Dense metric grid over (vary1, vary2) with the third parameter fixed.
// qdft sweeps carry one CEME grid; channel sweeps one EME grid per channel.
struct MetricSurface {
  SweepAxis axis1, axis2;
  std::string fixed_name;
  double fixed_value = 0.0;
  std::vector<std::string> metric_names;
  std::vector<std::vector<double>> values;  // [metric][i1 * axis2.count() + i2]

  struct Argmax {
    int i1 = 0, i2 = 0;
    double v1 = 0.0, v2 = 0.0;
    double value = 0.0;
  };
  Argmax argmax(int metric) const;

  // "# fixed: name=value" comment, then "<vary1>,<vary2>,<metrics...>" rows
  // in row-major order over vary1 then vary2. Byte-stable for equal inputs.
  void write_csv(std::ostream& out) const;
};

// Runs the full enhancement (encode, transform, rooting, inverse) at every
// grid point and scores the raw inverse-transform image, i.e. the enhanced
// image before display scaling. The forward transform is computed once.
MetricSurface sweep(const RasterImage& img, const SweepSpec& spec);

// Prepared per-image scoring used by sweeps and the GA fitness: the forward
// transform is cached, each call applies the rooting, inverts and scores the
// pre-rescale image.
class QdftEvaluator {
 public:
  QdftEvaluator(const RasterImage& img, EvenMode even_mode, BlockSpec blocks);
  double score(const RootingParams& params) const;  // CEME before scaling
  double score_with_post(const RootingParams& params, const PostTransform& post,
                         PostApply post_apply) const;  // display-domain CEME

 private:
  QuaternionSpectrum spectrum_;
  BlockSpec blocks_;
};

class ChannelEvaluator {
 public:
  ChannelEvaluator(const RasterImage& img, BlockSpec blocks);
  std::array<double, 3> score(const RootingParams& params) const;  // EME before scaling

 private:
  std::array<ComplexPlane, 3> spectra_;
  BlockSpec blocks_;
  int width_ = 0, height_ = 0;
};

struct GAConfig {
  int population = 30;
  int generations = 40;
  double crossover_rate = 0.9;
  double mutation_rate = 0.15;
  double mutation_sigma_frac = 0.05;  // sigma as a fraction of each bound width
  int elitism = 2;
  std::uint64_t seed = 0;
};

struct ParamBounds {
  double alpha_min = 0.01, alpha_max = 1.0;
  double beta_min = 0.0, beta_max = 3.0;
  double lambda_min = 0.01, lambda_max = 3.0;
};

struct GAGeneration {
  double best = 0.0;
  double mean = 0.0;
};

struct GAResult {
  RootingParams best{};
  double best_fitness = 0.0;  // fresh evaluation at the returned parameters
  std::vector<GAGeneration> log;  // one entry per evaluated generation
  int nonfinite_evaluations = 0;  // fitness values treated as -infinity
};

using FitnessFn = std::function<double(const RootingParams&)>;

// Real-coded GA: tournament selection of size 2, blend crossover, Gaussian
// mutation clipped to the bounds, elitism. Maximizes fn. Deterministic for a
// fixed seed; fitness evaluations are cached on quantized parameters.
GAResult ga_optimize_fn(const FitnessFn& fn, const ParamBounds& bounds, const GAConfig& cfg);

struct GAEvalOptions {
  EvenMode even_mode = EvenMode::zero;
  BlockSpec blocks{};
  double log_base = 0.0;
  bool include_post = false;  // score after the post transform instead of before
  PostTransform post{};
  PostApply post_apply = PostApply::magnitude;
};

// CEME of the qdft pipeline as the fitness function.
GAResult ga_optimize(const RasterImage& img, const ParamBounds& bounds, const GAConfig& cfg,
                     const GAEvalOptions& opts);

void write_ga_log_csv(std::ostream& out, const GAResult& result);

}  // namespace qalpha
