#include "search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <random>

#include "error.hpp"
#include "parallel.hpp"

namespace qalpha {

namespace {

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void assign_param(RootingParams& params, const std::string& name, double value) {
  if (name == "alpha")
    params.alpha = value;
  else if (name == "beta")
    params.beta = value;
  else if (name == "lambda")
    params.lambda = value;
  else
    fail_arg("unknown parameter '" + name + "'");
}

void validate_spec(const SweepSpec& spec) {
  std::vector<std::string> names = {spec.fixed_name, spec.vary1.name, spec.vary2.name};
  std::sort(names.begin(), names.end());
  if (names != std::vector<std::string>{"alpha", "beta", "lambda"})
    fail_arg("sweep must use each of alpha, beta, lambda exactly once");
  for (const SweepAxis* axis : {&spec.vary1, &spec.vary2}) {
    if (!(axis->step > 0.0)) fail_arg("sweep step must be > 0 for " + axis->name);
    if (axis->stop < axis->start) fail_arg("sweep range is empty for " + axis->name);
  }
  // Every grid point must be a valid parameter set.
  RootingParams lo, hi;
  lo.log_base = hi.log_base = spec.log_base;
  assign_param(lo, spec.fixed_name, spec.fixed_value);
  assign_param(hi, spec.fixed_name, spec.fixed_value);
  for (const SweepAxis* axis : {&spec.vary1, &spec.vary2}) {
    assign_param(lo, axis->name, axis->start);
    assign_param(hi, axis->name, axis->value(axis->count() - 1));
  }
  validate(lo);
  validate(hi);
}

struct ParamKey {
  long long a, b, l;
  bool operator<(const ParamKey& o) const {
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return l < o.l;
  }
};

ParamKey quantize(const RootingParams& p) {
  return {std::llround(p.alpha * 1e6), std::llround(p.beta * 1e6),
          std::llround(p.lambda * 1e6)};
}

}  // namespace

int SweepAxis::count() const {
  if (!(step > 0.0) || stop < start) return 0;
  return static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
}

QdftEvaluator::QdftEvaluator(const RasterImage& img, EvenMode even_mode, BlockSpec blocks)
    : blocks_(blocks) {
  spectrum_ = qdft_forward(encode(img, even_mode));
}

double QdftEvaluator::score(const RootingParams& params) const {
  const QuaternionSpectrum F = enhance_qspectrum(spectrum_, params);
  return ceme(qdft_inverse(F), blocks_);
}

double QdftEvaluator::score_with_post(const RootingParams& params, const PostTransform& post,
                                      PostApply post_apply) const {
  const QuaternionSpectrum F = enhance_qspectrum(spectrum_, params);
  RealQImage inv = qdft_inverse(F);
  if (post.kind == PostKind::none) return ceme(inv, blocks_);

  RasterImage display = rescale_to_8bit(inv);
  RealQImage y = RealQImage::create(inv.width, inv.height);
  y.e = std::move(inv.e);
  y.r = display.planes[0];
  y.g = display.planes[1];
  y.b = display.planes[2];
  if (post.kind == PostKind::histeq) {
    RasterImage eq = hist_equalize(display);
    y.r = eq.planes[0];
    y.g = eq.planes[1];
    y.b = eq.planes[2];
  } else if (post_apply == PostApply::magnitude) {
    RealQImage transformed = apply_to_magnitude(y, post);
    RasterImage scaled = rescale_to_8bit(transformed);
    y.e = std::move(transformed.e);
    y.r = scaled.planes[0];
    y.g = scaled.planes[1];
    y.b = scaled.planes[2];
  } else {
    std::vector<Plane> mapped(3);
    const Plane* src[3] = {&y.r, &y.g, &y.b};
    for (int ch = 0; ch < 3; ++ch)
      mapped[ch] = post.kind == PostKind::log ? log_transform(*src[ch], post.c, post.p)
                                              : gamma_transform(*src[ch], post.c, post.gamma);
    RasterImage scaled = rescale_to_8bit({&mapped[0], &mapped[1], &mapped[2]}, y.width, y.height);
    y.r = scaled.planes[0];
    y.g = scaled.planes[1];
    y.b = scaled.planes[2];
  }
  return ceme(y, blocks_);
}

ChannelEvaluator::ChannelEvaluator(const RasterImage& img, BlockSpec blocks) : blocks_(blocks) {
  if (img.channels() != 3) fail_arg("channel sweeps need a 3-channel image");
  width_ = img.width;
  height_ = img.height;
  for (int ch = 0; ch < 3; ++ch) spectra_[ch] = dft2_forward(img.planes[ch], width_, height_);
}

std::array<double, 3> ChannelEvaluator::score(const RootingParams& params) const {
  std::array<double, 3> out{};
  for (int ch = 0; ch < 3; ++ch) {
    const ComplexPlane F = enhance_channel_spectrum(spectra_[ch], params);
    out[ch] = eme(dft2_inverse(F), width_, height_, blocks_);
  }
  return out;
}

MetricSurface::Argmax MetricSurface::argmax(int metric) const {
  Argmax best;
  best.value = -std::numeric_limits<double>::infinity();
  const int n2 = axis2.count();
  for (int i1 = 0; i1 < axis1.count(); ++i1) {
    for (int i2 = 0; i2 < n2; ++i2) {
      const double v = values[metric][static_cast<std::size_t>(i1) * n2 + i2];
      if (v > best.value) {
        best = {i1, i2, axis1.value(i1), axis2.value(i2), v};
      }
    }
  }
  return best;
}

void MetricSurface::write_csv(std::ostream& out) const {
  out << "# fixed: " << fixed_name << '=' << format_value(fixed_value) << '\n';
  out << axis1.name << ',' << axis2.name;
  for (const std::string& name : metric_names) out << ',' << name;
  out << '\n';
  const int n2 = axis2.count();
  for (int i1 = 0; i1 < axis1.count(); ++i1) {
    for (int i2 = 0; i2 < n2; ++i2) {
      out << format_value(axis1.value(i1)) << ',' << format_value(axis2.value(i2));
      for (const auto& grid : values)
        out << ',' << format_value(grid[static_cast<std::size_t>(i1) * n2 + i2]);
      out << '\n';
    }
  }
}

MetricSurface sweep(const RasterImage& img, const SweepSpec& spec) {
  validate_spec(spec);
  MetricSurface surface;
  surface.axis1 = spec.vary1;
  surface.axis2 = spec.vary2;
  surface.fixed_name = spec.fixed_name;
  surface.fixed_value = spec.fixed_value;

  const int n1 = spec.vary1.count();
  const int n2 = spec.vary2.count();
  const std::size_t cells = static_cast<std::size_t>(n1) * n2;

  const auto params_at = [&](std::size_t cell) {
    RootingParams p;
    p.log_base = spec.log_base;
    assign_param(p, spec.fixed_name, spec.fixed_value);
    assign_param(p, spec.vary1.name, spec.vary1.value(static_cast<int>(cell) / n2));
    assign_param(p, spec.vary2.name, spec.vary2.value(static_cast<int>(cell) % n2));
    return p;
  };

  if (spec.method == Method::qdft) {
    surface.metric_names = {"metric"};
    surface.values.assign(1, std::vector<double>(cells, 0.0));
    const QdftEvaluator eval(img, spec.even_mode, spec.blocks);
    parallel_for(cells, [&](std::size_t begin, std::size_t end) {
      for (std::size_t cell = begin; cell < end; ++cell) {
        try {
          surface.values[0][cell] = eval.score(params_at(cell));
        } catch (const Error& e) {
          const RootingParams p = params_at(cell);
          throw Error(e.kind(), "sweep cell alpha=" + format_value(p.alpha) +
                                    " beta=" + format_value(p.beta) +
                                    " lambda=" + format_value(p.lambda) + ": " + e.what());
        }
      }
    });
  } else {
    surface.metric_names = {"eme_r", "eme_g", "eme_b"};
    surface.values.assign(3, std::vector<double>(cells, 0.0));
    const ChannelEvaluator eval(img, spec.blocks);
    parallel_for(cells, [&](std::size_t begin, std::size_t end) {
      for (std::size_t cell = begin; cell < end; ++cell) {
        try {
          const std::array<double, 3> scores = eval.score(params_at(cell));
          for (int ch = 0; ch < 3; ++ch) surface.values[ch][cell] = scores[ch];
        } catch (const Error& e) {
          const RootingParams p = params_at(cell);
          throw Error(e.kind(), "sweep cell alpha=" + format_value(p.alpha) +
                                    " beta=" + format_value(p.beta) +
                                    " lambda=" + format_value(p.lambda) + ": " + e.what());
        }
      }
    });
  }
  return surface;
}

GAResult ga_optimize_fn(const FitnessFn& fn, const ParamBounds& bounds, const GAConfig& cfg) {
  if (cfg.population < 4) fail_arg("GA population must be >= 4");
  if (cfg.generations < 1) fail_arg("GA needs at least one generation");
  if (cfg.elitism < 0 || cfg.elitism >= cfg.population)
    fail_arg("elitism must lie in [0, population)");
  if (!(bounds.alpha_min > 0.0 && bounds.alpha_max <= 1.0 && bounds.alpha_min <= bounds.alpha_max))
    fail_arg("alpha bounds must lie in (0, 1]");
  if (!(bounds.beta_min >= 0.0 && bounds.beta_min <= bounds.beta_max))
    fail_arg("beta bounds must be >= 0");
  if (!(bounds.lambda_min > 0.0 && bounds.lambda_min <= bounds.lambda_max))
    fail_arg("lambda bounds must be > 0");

  const double lo[3] = {bounds.alpha_min, bounds.beta_min, bounds.lambda_min};
  const double hi[3] = {bounds.alpha_max, bounds.beta_max, bounds.lambda_max};

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  using Genes = std::array<double, 3>;
  const auto to_params = [&](const Genes& g) {
    RootingParams p;
    p.alpha = g[0];
    p.beta = g[1];
    p.lambda = g[2];
    return p;
  };

  std::vector<Genes> population(cfg.population);
  for (Genes& g : population)
    for (int k = 0; k < 3; ++k) g[k] = lo[k] + (hi[k] - lo[k]) * unit(rng);

  GAResult result;
  std::map<ParamKey, double> cache;
  std::mutex cache_mutex;

  // Fitness for a whole generation; cache lookups and inserts stay on this
  // thread, the uncached evaluations run in parallel.
  const auto evaluate = [&](const std::vector<Genes>& gen) {
    std::vector<double> fitness(gen.size());
    std::vector<std::size_t> missing;
    for (std::size_t i = 0; i < gen.size(); ++i) {
      const auto it = cache.find(quantize(to_params(gen[i])));
      if (it != cache.end())
        fitness[i] = it->second;
      else
        missing.push_back(i);
    }
    parallel_for(missing.size(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t m = begin; m < end; ++m) {
        const std::size_t i = missing[m];
        double v = fn(to_params(gen[i]));
        if (!std::isfinite(v)) {
          v = -std::numeric_limits<double>::infinity();
        }
        fitness[i] = v;
        std::lock_guard<std::mutex> lock(cache_mutex);
        cache.emplace(quantize(to_params(gen[i])), v);
      }
    });
    for (std::size_t i : missing)
      if (fitness[i] == -std::numeric_limits<double>::infinity()) ++result.nonfinite_evaluations;
    return fitness;
  };

  std::vector<double> fitness = evaluate(population);

  Genes best_genes = population[0];
  double best_fitness = -std::numeric_limits<double>::infinity();
  const auto track_best = [&] {
    for (std::size_t i = 0; i < population.size(); ++i) {
      if (fitness[i] > best_fitness) {
        best_fitness = fitness[i];
        best_genes = population[i];
      }
    }
  };
  const auto log_generation = [&] {
    double sum = 0.0;
    double gen_best = -std::numeric_limits<double>::infinity();
    for (double v : fitness) {
      sum += std::isfinite(v) ? v : 0.0;
      gen_best = std::max(gen_best, v);
    }
    result.log.push_back({gen_best, sum / static_cast<double>(fitness.size())});
  };
  track_best();
  log_generation();

  const auto tournament = [&]() -> std::size_t {
    std::uniform_int_distribution<std::size_t> pick(0, population.size() - 1);
    const std::size_t a = pick(rng);
    const std::size_t b = pick(rng);
    if (fitness[a] == fitness[b]) return std::min(a, b);
    return fitness[a] > fitness[b] ? a : b;
  };

  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int gen = 0; gen < cfg.generations; ++gen) {
    std::vector<std::size_t> order(population.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fitness[a] > fitness[b]; });

    std::vector<Genes> next;
    next.reserve(population.size());
    for (int e = 0; e < cfg.elitism; ++e) next.push_back(population[order[e]]);

    while (next.size() < population.size()) {
      const Genes& p1 = population[tournament()];
      const Genes& p2 = population[tournament()];
      Genes child = p1;
      if (unit(rng) < cfg.crossover_rate) {
        // BLX-0.5: sample each gene uniformly from the parent interval
        // extended by half its width on both sides.
        for (int k = 0; k < 3; ++k) {
          const double a = std::min(p1[k], p2[k]);
          const double b = std::max(p1[k], p2[k]);
          const double ext = 0.5 * (b - a);
          child[k] = (a - ext) + (b - a + 2.0 * ext) * unit(rng);
        }
      }
      for (int k = 0; k < 3; ++k) {
        if (unit(rng) < cfg.mutation_rate)
          child[k] += gauss(rng) * cfg.mutation_sigma_frac * (hi[k] - lo[k]);
        child[k] = std::clamp(child[k], lo[k], hi[k]);
      }
      next.push_back(child);
    }
    population = std::move(next);
    fitness = evaluate(population);
    track_best();
    log_generation();
  }

  result.best = to_params(best_genes);
  result.best_fitness = fn(result.best);
  return result;
}

GAResult ga_optimize(const RasterImage& img, const ParamBounds& bounds, const GAConfig& cfg,
                     const GAEvalOptions& opts) {
  const QdftEvaluator eval(img, opts.even_mode, opts.blocks);
  GAResult result = ga_optimize_fn(
      [&](const RootingParams& base) {
        RootingParams p = base;
        p.log_base = opts.log_base;
        return opts.include_post ? eval.score_with_post(p, opts.post, opts.post_apply)
                                 : eval.score(p);
      },
      bounds, cfg);
  result.best.log_base = opts.log_base;
  return result;
}

void write_ga_log_csv(std::ostream& out, const GAResult& result) {
  out << "generation,best,mean\n";
  for (std::size_t i = 0; i < result.log.size(); ++i)
    out << i << ',' << format_value(result.log[i].best) << ','
        << format_value(result.log[i].mean) << '\n';
}

}  // namespace qalpha
