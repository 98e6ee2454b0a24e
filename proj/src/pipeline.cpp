#include "pipeline.hpp"

#include <utility>

#include "error.hpp"

namespace qalpha {

namespace {

constexpr double kResidueThreshold = 1e-6;
constexpr std::size_t kDirectSizeLimit = 128 * 128;

[[noreturn]] void stage_fail(const char* stage, const Error& e) {
  throw Error(e.kind(), std::string("stage ") + stage + ": " + e.what());
}

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    stage_fail(name, e);
  }
}

struct PadWindow {
  bool padded = false;
  int x0 = 0, y0 = 0;
  int width = 0, height = 0;  // original size
};

bool use_padding(int w, int h, SizePolicy policy) {
  if (is_pow2(w) && is_pow2(h)) return false;
  switch (policy) {
    case SizePolicy::direct:
      return false;
    case SizePolicy::pad:
      return true;
    case SizePolicy::automatic:
      return static_cast<std::size_t>(w) * h > kDirectSizeLimit;
  }
  return false;
}

QuaternionImage pad_image(const QuaternionImage& f, PadWindow& win) {
  const int pw = next_pow2(f.width);
  const int ph = next_pow2(f.height);
  win.padded = true;
  win.width = f.width;
  win.height = f.height;
  win.x0 = (pw - f.width) / 2;
  win.y0 = (ph - f.height) / 2;
  QuaternionImage out = QuaternionImage::create(pw, ph, f.even_mode);
  for (int y = 0; y < f.height; ++y)
    for (int x = 0; x < f.width; ++x) out.at(win.x0 + x, win.y0 + y) = f.at(x, y);
  return out;
}

RealQImage crop(const RealQImage& q, const PadWindow& win) {
  RealQImage out = RealQImage::create(win.width, win.height);
  for (int y = 0; y < win.height; ++y) {
    for (int x = 0; x < win.width; ++x) {
      const std::size_t src = static_cast<std::size_t>(win.y0 + y) * q.width + (win.x0 + x);
      const std::size_t dst = static_cast<std::size_t>(y) * win.width + x;
      out.e[dst] = q.e[src];
      out.r[dst] = q.r[src];
      out.g[dst] = q.g[src];
      out.b[dst] = q.b[src];
    }
  }
  return out;
}

Plane pad_plane(const Plane& p, int w, int h, const PadWindow& win, int pw, int ph) {
  Plane out(static_cast<std::size_t>(pw) * ph, 0.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      out[static_cast<std::size_t>(win.y0 + y) * pw + (win.x0 + x)] =
          p[static_cast<std::size_t>(y) * w + x];
  return out;
}

Plane crop_plane(const Plane& p, int pw, const PadWindow& win) {
  Plane out(static_cast<std::size_t>(win.width) * win.height);
  for (int y = 0; y < win.height; ++y)
    for (int x = 0; x < win.width; ++x)
      out[static_cast<std::size_t>(y) * win.width + x] =
          p[static_cast<std::size_t>(win.y0 + y) * pw + (win.x0 + x)];
  return out;
}

void validate_config(const RasterImage& img, const PipelineConfig& cfg) {
  if (cfg.method == Method::dft_channel && cfg.post_apply == PostApply::magnitude)
    fail_arg("magnitude post application requires the qdft method");
  if (cfg.colorspace == ColorModel::generic4) fail_arg("processing space must be rgb or xyz");
  if (cfg.colorspace == ColorModel::xyz && img.model == ColorModel::generic4)
    fail_arg("xyz processing needs an rgb input");
  validate(cfg.post);
  if (cfg.method == Method::qdft) {
    validate(cfg.rooting);
  } else {
    for (const RootingParams& p : cfg.channel_rooting) validate(p);
  }
}

// Post-transform and final negation on the display-domain image. Y tracks the
// four-plane image the metric sees; its color planes always mirror `display`.
void finish_stages(const PipelineConfig& cfg, RasterImage& display, RealQImage& y) {
  const auto sync = [&] {
    y.r = display.planes[0];
    y.g = display.planes[1];
    y.b = display.planes[2];
  };
  sync();

  if (cfg.post.kind != PostKind::none) {
    stage("post-transform", [&] {
      if (cfg.post.kind == PostKind::histeq) {
        display = hist_equalize(display);
      } else if (cfg.post_apply == PostApply::magnitude) {
        RealQImage transformed = apply_to_magnitude(y, cfg.post);
        y.e = std::move(transformed.e);
        display = rescale_to_8bit(transformed);
      } else {
        std::vector<Plane> mapped(3);
        for (int ch = 0; ch < 3; ++ch)
          mapped[ch] = cfg.post.kind == PostKind::log
                           ? log_transform(display.planes[ch], cfg.post.c, cfg.post.p)
                           : gamma_transform(display.planes[ch], cfg.post.c, cfg.post.gamma);
        display = rescale_to_8bit({&mapped[0], &mapped[1], &mapped[2]}, display.width,
                                  display.height, display.model);
      }
      sync();
      return 0;
    });
  }

  if (cfg.negative) {
    display = stage("negate-back", [&] { return negate(display); });
    sync();
  }
}

PipelineResult run_qdft(const RasterImage& input, const PipelineConfig& cfg) {
  RasterImage work = cfg.negative ? stage("negate", [&] { return negate(input); }) : input;
  const bool converted = cfg.colorspace == ColorModel::xyz && work.model == ColorModel::rgb;
  if (converted)
    work = stage("colorspace", [&] { return convert_colorspace(work, ColorModel::xyz); });

  QuaternionImage encoded = stage("encode", [&] { return encode(work, cfg.even_mode); });

  PadWindow win;
  win.width = encoded.width;
  win.height = encoded.height;
  if (use_padding(encoded.width, encoded.height, cfg.size_policy))
    encoded = pad_image(encoded, win);

  QuaternionSpectrum F = stage("forward-transform", [&] { return qdft_forward(encoded); });
  F = stage("rooting", [&] { return enhance_qspectrum(F, cfg.rooting); });
  RealQImage inv = stage("inverse-transform", [&] { return qdft_inverse(F); });
  if (win.padded) inv = crop(inv, win);

  if (converted) xyz_planes_to_rgb(inv.r, inv.g, inv.b);

  PipelineResult result;
  result.image = stage("rescale", [&] { return rescale_to_8bit(inv); });
  result.realq = RealQImage::create(inv.width, inv.height);
  result.realq.e = std::move(inv.e);

  finish_stages(cfg, result.image, result.realq);
  result.ceme = stage("metric", [&] { return ceme(result.realq, cfg.blocks); });
  return result;
}

PipelineResult run_channel(const RasterImage& input, const PipelineConfig& cfg) {
  if (input.channels() != 3) fail_arg("channel method needs a 3-channel image");
  RasterImage work = cfg.negative ? stage("negate", [&] { return negate(input); }) : input;
  const bool converted = cfg.colorspace == ColorModel::xyz && work.model == ColorModel::rgb;
  if (converted)
    work = stage("colorspace", [&] { return convert_colorspace(work, ColorModel::xyz); });

  PadWindow win;
  win.width = work.width;
  win.height = work.height;
  const bool padded = use_padding(work.width, work.height, cfg.size_policy);
  int tw = work.width, th = work.height;
  if (padded) {
    win.padded = true;
    tw = next_pow2(work.width);
    th = next_pow2(work.height);
    win.x0 = (tw - work.width) / 2;
    win.y0 = (th - work.height) / 2;
  }

  PipelineResult result;
  std::vector<Plane> out_planes(3);
  for (int ch = 0; ch < 3; ++ch) {
    Plane plane = padded ? pad_plane(work.planes[ch], work.width, work.height, win, tw, th)
                         : work.planes[ch];
    ComplexPlane F = stage("forward-transform", [&] { return dft2_forward(plane, tw, th); });
    F = stage("rooting", [&] { return enhance_channel_spectrum(F, cfg.channel_rooting[ch]); });
    double residue = 0.0;
    Plane inv = stage("inverse-transform", [&] { return dft2_inverse(F, &residue); });
    result.max_imag_residue = std::max(result.max_imag_residue, residue);
    out_planes[ch] = padded ? crop_plane(inv, tw, win) : std::move(inv);
  }
  result.residue_discarded = result.max_imag_residue > kResidueThreshold;

  if (converted) xyz_planes_to_rgb(out_planes[0], out_planes[1], out_planes[2]);

  result.image = stage("rescale", [&] {
    return rescale_to_8bit({&out_planes[0], &out_planes[1], &out_planes[2]}, work.width,
                           work.height, ColorModel::rgb);
  });
  result.realq = RealQImage::create(work.width, work.height);

  finish_stages(cfg, result.image, result.realq);
  result.eme = stage("metric", [&] {
    return std::array<double, 3>{
        eme(result.realq.r, result.realq.width, result.realq.height, cfg.blocks),
        eme(result.realq.g, result.realq.width, result.realq.height, cfg.blocks),
        eme(result.realq.b, result.realq.width, result.realq.height, cfg.blocks)};
  });
  return result;
}

}  // namespace

PipelineResult run_pipeline(const RasterImage& img, const PipelineConfig& cfg) {
  validate_config(img, cfg);
  return cfg.method == Method::qdft ? run_qdft(img, cfg) : run_channel(img, cfg);
}

}  // namespace qalpha
