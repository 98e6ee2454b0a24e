#include "qalpha/qalpha.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "error.hpp"
#include "io.hpp"
#include "metrics.hpp"
#include "parallel.hpp"
#include "pipeline.hpp"
#include "search.hpp"

struct qalpha_image {
  qalpha::RasterImage img;
};
struct qalpha_realq {
  qalpha::RealQImage q;
};
struct qalpha_surface {
  qalpha::MetricSurface s;
};

namespace {

thread_local std::string t_last_error;

qalpha_status to_status(const qalpha::Error& e) {
  t_last_error = e.what();
  switch (e.kind()) {
    case qalpha::ErrorKind::argument:
      return QALPHA_ERR_ARG;
    case qalpha::ErrorKind::io:
      return QALPHA_ERR_IO;
    case qalpha::ErrorKind::numeric:
      return QALPHA_ERR_NUMERIC;
  }
  return QALPHA_ERR_NUMERIC;
}

template <typename Fn>
qalpha_status guarded(Fn&& fn) {
  try {
    t_last_error.clear();
    fn();
    return QALPHA_OK;
  } catch (const qalpha::Error& e) {
    return to_status(e);
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    return QALPHA_ERR_NUMERIC;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return QALPHA_ERR_NUMERIC;
  }
}

qalpha_status require(bool ok, const char* msg) {
  if (ok) return QALPHA_OK;
  t_last_error = msg;
  return QALPHA_ERR_ARG;
}

qalpha::RootingParams to_rooting(const qalpha_params& p) {
  return {p.alpha, p.beta, p.lambda, p.log_base};
}

qalpha::PostTransform to_post(const qalpha_post& p) {
  qalpha::PostTransform out;
  switch (p.kind) {
    case QALPHA_POST_NONE:
      out.kind = qalpha::PostKind::none;
      break;
    case QALPHA_POST_LOG:
      out.kind = qalpha::PostKind::log;
      break;
    case QALPHA_POST_GAMMA:
      out.kind = qalpha::PostKind::gamma;
      break;
    case QALPHA_POST_HISTEQ:
      out.kind = qalpha::PostKind::histeq;
      break;
    default:
      qalpha::fail_arg("unknown post transform kind");
  }
  out.c = p.c;
  out.p = p.p;
  out.gamma = p.gamma;
  return out;
}

qalpha::EvenMode to_even(int mode) {
  switch (mode) {
    case QALPHA_EVEN_ZERO:
      return qalpha::EvenMode::zero;
    case QALPHA_EVEN_GRAY:
      return qalpha::EvenMode::gray;
    case QALPHA_EVEN_CHANNEL4:
      return qalpha::EvenMode::channel4;
  }
  qalpha::fail_arg("unknown even mode");
}

qalpha::SizePolicy to_policy(int policy) {
  switch (policy) {
    case QALPHA_SIZE_AUTO:
      return qalpha::SizePolicy::automatic;
    case QALPHA_SIZE_DIRECT:
      return qalpha::SizePolicy::direct;
    case QALPHA_SIZE_PAD:
      return qalpha::SizePolicy::pad;
  }
  qalpha::fail_arg("unknown size policy");
}

qalpha::PipelineConfig to_pipeline_config(const qalpha_config& cfg) {
  qalpha::PipelineConfig out;
  out.method = cfg.method == QALPHA_METHOD_DFT_CHANNEL ? qalpha::Method::dft_channel
                                                       : qalpha::Method::qdft;
  out.even_mode = to_even(cfg.even_mode);
  out.colorspace =
      cfg.colorspace == QALPHA_SPACE_XYZ ? qalpha::ColorModel::xyz : qalpha::ColorModel::rgb;
  out.rooting = to_rooting(cfg.rooting);
  for (int i = 0; i < 3; ++i) out.channel_rooting[i] = to_rooting(cfg.channel_rooting[i]);
  out.post = to_post(cfg.post);
  out.post_apply = cfg.post_apply == QALPHA_APPLY_PER_PLANE ? qalpha::PostApply::per_plane
                                                            : qalpha::PostApply::magnitude;
  out.negative = cfg.negative != 0;
  out.blocks = {cfg.block_w, cfg.block_h};
  out.size_policy = to_policy(cfg.size_policy);
  return out;
}

}  // namespace

extern "C" {

const char* qalpha_version(void) { return "0.1.0"; }

const char* qalpha_last_error(void) { return t_last_error.c_str(); }

void qalpha_set_threads(int n) { qalpha::set_max_threads(n); }

qalpha_status qalpha_image_load(const char* path, qalpha_image** out) {
  if (qalpha_status s = require(path && out, "null argument")) return s;
  return guarded([&] { *out = new qalpha_image{qalpha::load_image(path)}; });
}

qalpha_status qalpha_image_save(const qalpha_image* img, const char* path) {
  if (qalpha_status s = require(img && path, "null argument")) return s;
  return guarded([&] { qalpha::save_image(img->img, path); });
}

void qalpha_image_free(qalpha_image* img) { delete img; }

int qalpha_image_width(const qalpha_image* img) { return img ? img->img.width : 0; }
int qalpha_image_height(const qalpha_image* img) { return img ? img->img.height : 0; }
int qalpha_image_channels(const qalpha_image* img) { return img ? img->img.channels() : 0; }

qalpha_status qalpha_image_create(int width, int height, int channels,
                                  const double* const* planes, qalpha_image** out) {
  if (qalpha_status s = require(planes && out, "null argument")) return s;
  return guarded([&] {
    qalpha::RasterImage img = qalpha::RasterImage::create(
        width, height, channels,
        channels == 4 ? qalpha::ColorModel::generic4 : qalpha::ColorModel::rgb);
    const std::size_t n = img.pixel_count();
    for (int ch = 0; ch < channels; ++ch) {
      if (!planes[ch]) qalpha::fail_arg("null plane pointer");
      std::memcpy(img.planes[ch].data(), planes[ch], n * sizeof(double));
    }
    *out = new qalpha_image{std::move(img)};
  });
}

qalpha_status qalpha_image_plane(const qalpha_image* img, int channel, double* out) {
  if (qalpha_status s = require(img && out, "null argument")) return s;
  if (qalpha_status s = require(channel >= 0 && channel < img->img.channels(),
                                "channel index out of range"))
    return s;
  std::memcpy(out, img->img.planes[channel].data(),
              img->img.pixel_count() * sizeof(double));
  return QALPHA_OK;
}

qalpha_status qalpha_image_negate(const qalpha_image* img, qalpha_image** out) {
  if (qalpha_status s = require(img && out, "null argument")) return s;
  return guarded([&] { *out = new qalpha_image{qalpha::negate(img->img)}; });
}

qalpha_status qalpha_image_convert(const qalpha_image* img, const char* colorspace,
                                   qalpha_image** out) {
  if (qalpha_status s = require(img && colorspace && out, "null argument")) return s;
  return guarded([&] {
    const std::string space = colorspace;
    qalpha::ColorModel target;
    if (space == "rgb")
      target = qalpha::ColorModel::rgb;
    else if (space == "xyz")
      target = qalpha::ColorModel::xyz;
    else
      qalpha::fail_arg("colorspace must be rgb or xyz");
    *out = new qalpha_image{qalpha::convert_colorspace(img->img, target)};
  });
}

qalpha_status qalpha_image_downscale(const qalpha_image* img, int max_side, qalpha_image** out) {
  if (qalpha_status s = require(img && out, "null argument")) return s;
  return guarded([&] { *out = new qalpha_image{qalpha::downscale(img->img, max_side)}; });
}

qalpha_status qalpha_image_equalize(const qalpha_image* img, qalpha_image** out) {
  if (qalpha_status s = require(img && out, "null argument")) return s;
  return guarded([&] { *out = new qalpha_image{qalpha::hist_equalize(img->img)}; });
}

qalpha_status qalpha_image_histogram(const qalpha_image* img, uint64_t* counts) {
  if (qalpha_status s = require(img && counts, "null argument")) return s;
  return guarded([&] {
    const auto hist = qalpha::histogram(img->img);
    for (std::size_t ch = 0; ch < hist.size(); ++ch)
      std::memcpy(counts + ch * 256, hist[ch].data(), 256 * sizeof(uint64_t));
  });
}

qalpha_status qalpha_image_histogram_csv(const qalpha_image* img, const char* path) {
  if (qalpha_status s = require(img && path, "null argument")) return s;
  return guarded([&] {
    const auto hist = qalpha::histogram(img->img);
    std::ofstream out(path);
    if (!out) qalpha::fail_io(std::string("cannot write ") + path);
    out << "bin";
    for (std::size_t ch = 0; ch < hist.size(); ++ch) out << ",ch" << (ch + 1);
    out << '\n';
    for (int bin = 0; bin < 256; ++bin) {
      out << bin;
      for (const auto& h : hist) out << ',' << h[bin];
      out << '\n';
    }
    if (!out) qalpha::fail_io(std::string("write failed for ") + path);
  });
}

void qalpha_config_defaults(qalpha_config* cfg) {
  if (!cfg) return;
  std::memset(cfg, 0, sizeof(*cfg));
  cfg->method = QALPHA_METHOD_QDFT;
  cfg->even_mode = QALPHA_EVEN_ZERO;
  cfg->colorspace = QALPHA_SPACE_RGB;
  cfg->post_apply = QALPHA_APPLY_MAGNITUDE;
  cfg->size_policy = QALPHA_SIZE_AUTO;
  cfg->rooting = {1.0, 0.0, 1.0, 0.0};
  for (auto& p : cfg->channel_rooting) p = {1.0, 0.0, 1.0, 0.0};
  cfg->post = {QALPHA_POST_NONE, 1.0, 1.0, 1.0};
  cfg->block_w = 8;
  cfg->block_h = 8;
}

qalpha_status qalpha_enhance(const qalpha_image* img, const qalpha_config* cfg,
                             qalpha_image** out_img, qalpha_realq** out_realq,
                             qalpha_report* report) {
  if (qalpha_status s = require(img && cfg && out_img, "null argument")) return s;
  return guarded([&] {
    qalpha::PipelineResult result = qalpha::run_pipeline(img->img, to_pipeline_config(*cfg));
    if (report) {
      report->ceme = result.ceme;
      for (int i = 0; i < 3; ++i) report->eme[i] = result.eme[i];
      report->max_imag_residue = result.max_imag_residue;
      report->residue_discarded = result.residue_discarded ? 1 : 0;
    }
    if (out_realq) *out_realq = new qalpha_realq{std::move(result.realq)};
    *out_img = new qalpha_image{std::move(result.image)};
  });
}

qalpha_status qalpha_realq_create(int width, int height, const double* e, const double* r,
                                  const double* g, const double* b, qalpha_realq** out) {
  if (qalpha_status s = require(e && r && g && b && out, "null argument")) return s;
  return guarded([&] {
    qalpha::RealQImage q = qalpha::RealQImage::create(width, height);
    const std::size_t n = q.pixel_count();
    std::memcpy(q.e.data(), e, n * sizeof(double));
    std::memcpy(q.r.data(), r, n * sizeof(double));
    std::memcpy(q.g.data(), g, n * sizeof(double));
    std::memcpy(q.b.data(), b, n * sizeof(double));
    *out = new qalpha_realq{std::move(q)};
  });
}

qalpha_status qalpha_realq_save(const qalpha_realq* q, const char* path) {
  if (qalpha_status s = require(q && path, "null argument")) return s;
  return guarded([&] { qalpha::write_rqi(q->q, path); });
}

qalpha_status qalpha_realq_load(const char* path, qalpha_realq** out) {
  if (qalpha_status s = require(path && out, "null argument")) return s;
  return guarded([&] { *out = new qalpha_realq{qalpha::read_rqi(path)}; });
}

void qalpha_realq_free(qalpha_realq* q) { delete q; }

int qalpha_realq_width(const qalpha_realq* q) { return q ? q->q.width : 0; }
int qalpha_realq_height(const qalpha_realq* q) { return q ? q->q.height : 0; }

qalpha_status qalpha_realq_planes(const qalpha_realq* q, double* e, double* r, double* g,
                                  double* b) {
  if (qalpha_status s = require(q != nullptr, "null argument")) return s;
  const std::size_t n = q->q.pixel_count();
  if (e) std::memcpy(e, q->q.e.data(), n * sizeof(double));
  if (r) std::memcpy(r, q->q.r.data(), n * sizeof(double));
  if (g) std::memcpy(g, q->q.g.data(), n * sizeof(double));
  if (b) std::memcpy(b, q->q.b.data(), n * sizeof(double));
  return QALPHA_OK;
}

qalpha_status qalpha_realq_ceme(const qalpha_realq* q, int block_w, int block_h, double* out) {
  if (qalpha_status s = require(q && out, "null argument")) return s;
  return guarded([&] { *out = qalpha::ceme(q->q, {block_w, block_h}); });
}

qalpha_status qalpha_image_ceme(const qalpha_image* img, int block_w, int block_h, double* out) {
  if (qalpha_status s = require(img && out, "null argument")) return s;
  return guarded([&] {
    if (img->img.channels() != 3) qalpha::fail_arg("ceme of a raster needs 3 channels");
    qalpha::RealQImage q = qalpha::RealQImage::create(img->img.width, img->img.height);
    q.r = img->img.planes[0];
    q.g = img->img.planes[1];
    q.b = img->img.planes[2];
    *out = qalpha::ceme(q, {block_w, block_h});
  });
}

qalpha_status qalpha_image_eme(const qalpha_image* img, int block_w, int block_h, double* out) {
  if (qalpha_status s = require(img && out, "null argument")) return s;
  return guarded([&] {
    for (int ch = 0; ch < img->img.channels(); ++ch)
      out[ch] = qalpha::eme(img->img.planes[ch], img->img.width, img->img.height,
                            {block_w, block_h});
  });
}

void qalpha_sweep_defaults(qalpha_sweep_spec* spec) {
  if (!spec) return;
  std::memset(spec, 0, sizeof(*spec));
  spec->method = QALPHA_METHOD_QDFT;
  spec->even_mode = QALPHA_EVEN_ZERO;
  spec->block_w = 8;
  spec->block_h = 8;
}

qalpha_status qalpha_sweep(const qalpha_image* img, const qalpha_sweep_spec* spec,
                           qalpha_surface** out) {
  if (qalpha_status s = require(img && spec && out, "null argument")) return s;
  return guarded([&] {
    qalpha::SweepSpec s;
    s.fixed_name = spec->fixed_name;
    s.fixed_value = spec->fixed_value;
    s.vary1 = {spec->vary1_name, spec->vary1_start, spec->vary1_stop, spec->vary1_step};
    s.vary2 = {spec->vary2_name, spec->vary2_start, spec->vary2_stop, spec->vary2_step};
    s.method = spec->method == QALPHA_METHOD_DFT_CHANNEL ? qalpha::Method::dft_channel
                                                         : qalpha::Method::qdft;
    s.even_mode = to_even(spec->even_mode);
    s.blocks = {spec->block_w, spec->block_h};
    s.log_base = spec->log_base;
    *out = new qalpha_surface{qalpha::sweep(img->img, s)};
  });
}

void qalpha_surface_free(qalpha_surface* s) { delete s; }

int qalpha_surface_metric_count(const qalpha_surface* s) {
  return s ? static_cast<int>(s->s.metric_names.size()) : 0;
}

const char* qalpha_surface_metric_name(const qalpha_surface* s, int metric) {
  if (!s || metric < 0 || metric >= static_cast<int>(s->s.metric_names.size())) return "";
  return s->s.metric_names[metric].c_str();
}

qalpha_status qalpha_surface_dims(const qalpha_surface* s, int* n1, int* n2) {
  if (qalpha_status st = require(s != nullptr, "null argument")) return st;
  if (n1) *n1 = s->s.axis1.count();
  if (n2) *n2 = s->s.axis2.count();
  return QALPHA_OK;
}

qalpha_status qalpha_surface_value(const qalpha_surface* s, int metric, int i1, int i2,
                                   double* out) {
  if (qalpha_status st = require(s && out, "null argument")) return st;
  const int n1 = s->s.axis1.count();
  const int n2 = s->s.axis2.count();
  if (qalpha_status st =
          require(metric >= 0 && metric < static_cast<int>(s->s.values.size()) && i1 >= 0 &&
                      i1 < n1 && i2 >= 0 && i2 < n2,
                  "surface index out of range"))
    return st;
  *out = s->s.values[metric][static_cast<std::size_t>(i1) * n2 + i2];
  return QALPHA_OK;
}

qalpha_status qalpha_surface_argmax(const qalpha_surface* s, int metric, double* v1, double* v2,
                                    double* value) {
  if (qalpha_status st = require(s != nullptr, "null argument")) return st;
  if (qalpha_status st =
          require(metric >= 0 && metric < static_cast<int>(s->s.values.size()),
                  "surface metric out of range"))
    return st;
  const auto best = s->s.argmax(metric);
  if (v1) *v1 = best.v1;
  if (v2) *v2 = best.v2;
  if (value) *value = best.value;
  return QALPHA_OK;
}

qalpha_status qalpha_surface_write_csv(const qalpha_surface* s, const char* path) {
  if (qalpha_status st = require(s && path, "null argument")) return st;
  return guarded([&] {
    std::ofstream out(path);
    if (!out) qalpha::fail_io(std::string("cannot write ") + path);
    s->s.write_csv(out);
    if (!out) qalpha::fail_io(std::string("write failed for ") + path);
  });
}

void qalpha_ga_defaults(qalpha_ga_config* cfg) {
  if (!cfg) return;
  std::memset(cfg, 0, sizeof(*cfg));
  cfg->population = 30;
  cfg->generations = 40;
  cfg->elitism = 2;
  cfg->crossover_rate = 0.9;
  cfg->mutation_rate = 0.15;
  cfg->mutation_sigma_frac = 0.05;
  cfg->alpha_min = 0.01;
  cfg->alpha_max = 1.0;
  cfg->beta_min = 0.0;
  cfg->beta_max = 3.0;
  cfg->lambda_min = 0.01;
  cfg->lambda_max = 3.0;
  cfg->even_mode = QALPHA_EVEN_ZERO;
  cfg->block_w = 8;
  cfg->block_h = 8;
  cfg->post = {QALPHA_POST_NONE, 1.0, 1.0, 1.0};
  cfg->post_apply = QALPHA_APPLY_MAGNITUDE;
}

qalpha_status qalpha_optimize(const qalpha_image* img, const qalpha_ga_config* cfg,
                              qalpha_params* best, double* best_ceme,
                              const char* log_csv_path) {
  if (qalpha_status s = require(img && cfg && best, "null argument")) return s;
  return guarded([&] {
    qalpha::GAConfig ga;
    ga.population = cfg->population;
    ga.generations = cfg->generations;
    ga.elitism = cfg->elitism;
    ga.crossover_rate = cfg->crossover_rate;
    ga.mutation_rate = cfg->mutation_rate;
    ga.mutation_sigma_frac = cfg->mutation_sigma_frac;
    ga.seed = cfg->seed;
    qalpha::ParamBounds bounds;
    bounds.alpha_min = cfg->alpha_min;
    bounds.alpha_max = cfg->alpha_max;
    bounds.beta_min = cfg->beta_min;
    bounds.beta_max = cfg->beta_max;
    bounds.lambda_min = cfg->lambda_min;
    bounds.lambda_max = cfg->lambda_max;
    qalpha::GAEvalOptions opts;
    opts.even_mode = to_even(cfg->even_mode);
    opts.blocks = {cfg->block_w, cfg->block_h};
    opts.log_base = cfg->log_base;
    opts.include_post = cfg->include_post != 0;
    opts.post = to_post(cfg->post);
    opts.post_apply = cfg->post_apply == QALPHA_APPLY_PER_PLANE
                          ? qalpha::PostApply::per_plane
                          : qalpha::PostApply::magnitude;

    const qalpha::GAResult result = qalpha::ga_optimize(img->img, bounds, ga, opts);
    best->alpha = result.best.alpha;
    best->beta = result.best.beta;
    best->lambda = result.best.lambda;
    best->log_base = result.best.log_base;
    if (best_ceme) *best_ceme = result.best_fitness;
    if (log_csv_path) {
      std::ofstream out(log_csv_path);
      if (!out) qalpha::fail_io(std::string("cannot write ") + log_csv_path);
      qalpha::write_ga_log_csv(out, result);
      if (!out) qalpha::fail_io(std::string("write failed for ") + log_csv_path);
    }
  });
}

}  // extern "C"
