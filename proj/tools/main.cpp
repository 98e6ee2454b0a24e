// qalpha command-line front end. Talks to the library exclusively through the
// public C API in qalpha/qalpha.h.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "qalpha/qalpha.h"

namespace {

namespace fs = std::filesystem;

// ---- small utilities ------------------------------------------------------

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

struct ImageDeleter {
  void operator()(qalpha_image* p) const { qalpha_image_free(p); }
};
struct RealqDeleter {
  void operator()(qalpha_realq* p) const { qalpha_realq_free(p); }
};
struct SurfaceDeleter {
  void operator()(qalpha_surface* p) const { qalpha_surface_free(p); }
};
using ImagePtr = std::unique_ptr<qalpha_image, ImageDeleter>;
using RealqPtr = std::unique_ptr<qalpha_realq, RealqDeleter>;
using SurfacePtr = std::unique_ptr<qalpha_surface, SurfaceDeleter>;

// Exits with the library status code (1 usage, 2 I/O, 3 numeric) on failure.
void check(qalpha_status status, const std::string& context) {
  if (status == QALPHA_OK) return;
  std::cerr << "qalpha: " << context << ": " << qalpha_last_error() << "\n";
  std::exit(static_cast<int>(status));
}

[[noreturn]] void usage_error(const std::string& msg) {
  std::cerr << "qalpha: " << msg << "\n";
  std::exit(1);
}

ImagePtr load_image(const std::string& path) {
  qalpha_image* img = nullptr;
  check(qalpha_image_load(path.c_str(), &img), "loading " + path);
  return ImagePtr(img);
}

void save_image(const qalpha_image* img, const std::string& path) {
  check(qalpha_image_save(img, path.c_str()), "writing " + path);
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  long long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Run manifests are plain "key: value" lines, one per entry.
class Manifest {
 public:
  void add(const std::string& key, const std::string& value) {
    entries_.emplace_back(key, value);
  }
  void add(const std::string& key, double value) { add(key, fmt_g(value)); }
  void add(const std::string& key, long long value) { add(key, std::to_string(value)); }

  void write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) {
      std::cerr << "qalpha: cannot write manifest " << path << "\n";
      std::exit(2);
    }
    for (const auto& [key, value] : entries_) out << key << ": " << value << "\n";
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// ---- flag parsing helpers ---------------------------------------------------

int parse_method(const std::string& s) {
  if (s == "qdft") return QALPHA_METHOD_QDFT;
  if (s == "dft-channel") return QALPHA_METHOD_DFT_CHANNEL;
  usage_error("unknown method '" + s + "' (expected qdft or dft-channel)");
}

int parse_even(const std::string& s) {
  if (s == "zero") return QALPHA_EVEN_ZERO;
  if (s == "gray") return QALPHA_EVEN_GRAY;
  if (s == "channel4") return QALPHA_EVEN_CHANNEL4;
  usage_error("unknown even mode '" + s + "'");
}

int parse_space(const std::string& s) {
  if (s == "rgb") return QALPHA_SPACE_RGB;
  if (s == "xyz") return QALPHA_SPACE_XYZ;
  usage_error("unknown colorspace '" + s + "'");
}

int parse_post(const std::string& s) {
  if (s == "none") return QALPHA_POST_NONE;
  if (s == "log") return QALPHA_POST_LOG;
  if (s == "gamma") return QALPHA_POST_GAMMA;
  if (s == "histeq") return QALPHA_POST_HISTEQ;
  usage_error("unknown post transform '" + s + "'");
}

int parse_apply(const std::string& s) {
  if (s == "per-plane") return QALPHA_APPLY_PER_PLANE;
  if (s == "magnitude") return QALPHA_APPLY_MAGNITUDE;
  usage_error("unknown post application '" + s + "'");
}

int parse_policy(const std::string& s) {
  if (s == "auto") return QALPHA_SIZE_AUTO;
  if (s == "direct") return QALPHA_SIZE_DIRECT;
  if (s == "pad") return QALPHA_SIZE_PAD;
  usage_error("unknown size policy '" + s + "'");
}

// Blocks are written L1xL2 (height x width), e.g. --blocks 8x8.
std::pair<int, int> parse_blocks(const std::string& s) {
  const std::size_t x = s.find('x');
  if (x == std::string::npos) usage_error("blocks must look like 8x8");
  try {
    const int h = std::stoi(s.substr(0, x));
    const int w = std::stoi(s.substr(x + 1));
    if (h <= 0 || w <= 0) throw std::invalid_argument("");
    return {h, w};
  } catch (const std::exception&) {
    usage_error("blocks must look like 8x8");
  }
}

double parse_log_base(const std::string& s) {
  if (s == "e" || s.empty()) return 0.0;
  try {
    const double v = std::stod(s);
    if (v <= 0.0 || v == 1.0) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    usage_error("log base must be 'e' or a positive number != 1");
  }
}

const char* method_name(int method) {
  return method == QALPHA_METHOD_DFT_CHANNEL ? "dft-channel" : "qdft";
}
const char* even_name(int mode) {
  switch (mode) {
    case QALPHA_EVEN_GRAY:
      return "gray";
    case QALPHA_EVEN_CHANNEL4:
      return "channel4";
    default:
      return "zero";
  }
}
const char* post_name(int kind) {
  switch (kind) {
    case QALPHA_POST_LOG:
      return "log";
    case QALPHA_POST_GAMMA:
      return "gamma";
    case QALPHA_POST_HISTEQ:
      return "histeq";
    default:
      return "none";
  }
}

// Shared option bundle most subcommands need.
struct CommonOpts {
  std::string even = "zero";
  std::string colorspace = "rgb";
  std::string blocks = "8x8";
  std::string log_base = "e";
  bool negative = false;
  int downscale = 0;
  int threads = 0;
  bool threads_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_space = true) {
  cmd->add_option("--even", opts.even, "Scalar-part choice: zero|gray|channel4");
  if (with_space)
    cmd->add_option("--colorspace", opts.colorspace, "Processing space: rgb|xyz");
  cmd->add_option("--blocks", opts.blocks, "Metric block size L1xL2 (default 8x8)");
  cmd->add_option("--log-base", opts.log_base, "Logarithm base for the magnitude weight");
  cmd->add_flag("--negative", opts.negative, "Process the negative image");
  cmd->add_option("--downscale", opts.downscale, "Resize so the longest side is N first");
  cmd->add_option("--threads", opts.threads, "Worker thread cap (env QALPHA_THREADS)")
      ->each([&](const std::string&) { opts.threads_set = true; });
}

void apply_threads(const CommonOpts& opts, Manifest* manifest) {
  int threads = 0;
  if (opts.threads_set) {
    threads = opts.threads;
  } else if (const char* env = std::getenv("QALPHA_THREADS")) {
    threads = std::atoi(env);
  }
  qalpha_set_threads(threads);
  if (manifest) manifest->add("threads", static_cast<long long>(threads));
}

ImagePtr prepare_input(const std::string& path, int downscale) {
  ImagePtr img = load_image(path);
  if (downscale > 0) {
    qalpha_image* small = nullptr;
    check(qalpha_image_downscale(img.get(), downscale, &small), "downscaling");
    img.reset(small);
  }
  return img;
}

// ---- metric CSV ------------------------------------------------------------

constexpr const char* kMetricHeader =
    "image,method,alpha,beta,lambda,post,ceme,eme_r,eme_g,eme_b";

struct MetricRow {
  std::string image;
  std::string method;
  std::string alpha, beta, lambda;
  std::string post;
  std::string ceme;
  std::string eme[3];

  std::string line() const {
    std::string out = image + ',' + method + ',' + alpha + ',' + beta + ',' + lambda + ',' +
                      post + ',' + ceme;
    for (const auto& e : eme) out += ',' + e;
    return out;
  }
};

void write_metric_csv(const std::string& path, const std::vector<MetricRow>& rows) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "qalpha: cannot write " << path << "\n";
    std::exit(2);
  }
  out << kMetricHeader << "\n";
  for (const MetricRow& row : rows) out << row.line() << "\n";
}

MetricRow score_raster(const qalpha_image* img, const std::string& name,
                       const std::string& method, int block_h, int block_w) {
  MetricRow row;
  row.image = name;
  row.method = method;
  double ceme = 0.0;
  check(qalpha_image_ceme(img, block_w, block_h, &ceme), "ceme of " + name);
  row.ceme = fmt_g(ceme);
  double eme[4] = {0, 0, 0, 0};
  check(qalpha_image_eme(img, block_w, block_h, eme), "eme of " + name);
  for (int ch = 0; ch < 3; ++ch) row.eme[ch] = fmt_g(eme[ch]);
  return row;
}

// ---- enhance ----------------------------------------------------------------

struct EnhanceOpts {
  std::string input, output;
  std::string method = "qdft";
  double alpha = 1.0, beta = 0.0, lambda = 1.0;
  // per-channel overrides; NaN means "use the shared value"
  double alpha_ch[3] = {NAN, NAN, NAN};
  double beta_ch[3] = {NAN, NAN, NAN};
  double lambda_ch[3] = {NAN, NAN, NAN};
  std::string post = "none";
  double c = 1.0, p = 1.0, gamma = 1.0;
  std::string post_apply;  // empty = method default
  std::string size_policy = "auto";
  std::string save_realq;
  std::string manifest_path, metrics_path;
  CommonOpts common;
};

void fill_config(const EnhanceOpts& o, qalpha_config* cfg) {
  qalpha_config_defaults(cfg);
  cfg->method = parse_method(o.method);
  cfg->even_mode = parse_even(o.common.even);
  cfg->colorspace = parse_space(o.common.colorspace);
  cfg->negative = o.common.negative ? 1 : 0;
  cfg->size_policy = parse_policy(o.size_policy);
  const auto [bh, bw] = parse_blocks(o.common.blocks);
  cfg->block_h = bh;
  cfg->block_w = bw;
  const double base = parse_log_base(o.common.log_base);

  cfg->rooting = {o.alpha, o.beta, o.lambda, base};
  for (int ch = 0; ch < 3; ++ch) {
    cfg->channel_rooting[ch] = cfg->rooting;
    if (!std::isnan(o.alpha_ch[ch])) cfg->channel_rooting[ch].alpha = o.alpha_ch[ch];
    if (!std::isnan(o.beta_ch[ch])) cfg->channel_rooting[ch].beta = o.beta_ch[ch];
    if (!std::isnan(o.lambda_ch[ch])) cfg->channel_rooting[ch].lambda = o.lambda_ch[ch];
  }

  cfg->post.kind = parse_post(o.post);
  cfg->post.c = o.c;
  cfg->post.p = o.p;
  cfg->post.gamma = o.gamma;
  if (o.post_apply.empty())
    cfg->post_apply = cfg->method == QALPHA_METHOD_DFT_CHANNEL ? QALPHA_APPLY_PER_PLANE
                                                               : QALPHA_APPLY_MAGNITUDE;
  else
    cfg->post_apply = parse_apply(o.post_apply);
}

int run_enhance(const EnhanceOpts& o) {
  Stopwatch watch;
  Manifest manifest;
  manifest.add("tool", std::string("qalpha ") + qalpha_version());
  manifest.add("command", "enhance");
  manifest.add("input", o.input);
  apply_threads(o.common, &manifest);

  ImagePtr img = prepare_input(o.input, o.common.downscale);
  qalpha_config cfg;
  fill_config(o, &cfg);

  qalpha_image* out_raw = nullptr;
  qalpha_realq* realq_raw = nullptr;
  qalpha_report report;
  check(qalpha_enhance(img.get(), &cfg, &out_raw, &realq_raw, &report), "enhancing");
  ImagePtr out(out_raw);
  RealqPtr realq(realq_raw);

  save_image(out.get(), o.output);
  if (!o.save_realq.empty())
    check(qalpha_realq_save(realq.get(), o.save_realq.c_str()), "writing " + o.save_realq);

  manifest.add("image_size", std::to_string(qalpha_image_width(img.get())) + "x" +
                                 std::to_string(qalpha_image_height(img.get())));
  manifest.add("method", method_name(cfg.method));
  manifest.add("even", even_name(cfg.even_mode));
  manifest.add("colorspace", cfg.colorspace == QALPHA_SPACE_XYZ ? "xyz" : "rgb");
  manifest.add("alpha", cfg.rooting.alpha);
  manifest.add("beta", cfg.rooting.beta);
  manifest.add("lambda", cfg.rooting.lambda);
  if (cfg.method == QALPHA_METHOD_DFT_CHANNEL) {
    for (int ch = 0; ch < 3; ++ch) {
      const std::string suffix = ch == 0 ? "_r" : ch == 1 ? "_g" : "_b";
      manifest.add("alpha" + suffix, cfg.channel_rooting[ch].alpha);
      manifest.add("beta" + suffix, cfg.channel_rooting[ch].beta);
      manifest.add("lambda" + suffix, cfg.channel_rooting[ch].lambda);
    }
  }
  manifest.add("log_base", o.common.log_base);
  manifest.add("post", post_name(cfg.post.kind));
  if (cfg.post.kind == QALPHA_POST_LOG) {
    manifest.add("post_c", cfg.post.c);
    manifest.add("post_p", cfg.post.p);
  } else if (cfg.post.kind == QALPHA_POST_GAMMA) {
    manifest.add("post_c", cfg.post.c);
    manifest.add("post_gamma", cfg.post.gamma);
  }
  manifest.add("post_apply",
               cfg.post_apply == QALPHA_APPLY_PER_PLANE ? "per-plane" : "magnitude");
  manifest.add("negative", cfg.negative ? "true" : "false");
  manifest.add("blocks", o.common.blocks);
  manifest.add("size_policy", o.size_policy);
  manifest.add("output", o.output);
  if (!o.save_realq.empty()) manifest.add("realq", o.save_realq);

  MetricRow row;
  row.image = o.output;
  row.method = method_name(cfg.method);
  row.alpha = fmt_g(cfg.rooting.alpha);
  row.beta = fmt_g(cfg.rooting.beta);
  row.lambda = fmt_g(cfg.rooting.lambda);
  if (cfg.method == QALPHA_METHOD_DFT_CHANNEL) {
    row.alpha = fmt_g(cfg.channel_rooting[0].alpha) + "/" + fmt_g(cfg.channel_rooting[1].alpha) +
                "/" + fmt_g(cfg.channel_rooting[2].alpha);
    row.beta = fmt_g(cfg.channel_rooting[0].beta) + "/" + fmt_g(cfg.channel_rooting[1].beta) +
               "/" + fmt_g(cfg.channel_rooting[2].beta);
    row.lambda = fmt_g(cfg.channel_rooting[0].lambda) + "/" +
                 fmt_g(cfg.channel_rooting[1].lambda) + "/" +
                 fmt_g(cfg.channel_rooting[2].lambda);
  }
  row.post = post_name(cfg.post.kind);
  if (cfg.method == QALPHA_METHOD_QDFT) {
    row.ceme = fmt_g(report.ceme);
    manifest.add("ceme", report.ceme);
    std::cout << "ceme " << fmt_g(report.ceme) << "\n";
  } else {
    for (int ch = 0; ch < 3; ++ch) row.eme[ch] = fmt_g(report.eme[ch]);
    manifest.add("eme_r", report.eme[0]);
    manifest.add("eme_g", report.eme[1]);
    manifest.add("eme_b", report.eme[2]);
    manifest.add("max_imag_residue", report.max_imag_residue);
    if (report.residue_discarded)
      std::cerr << "qalpha: warning: imaginary residue " << fmt_g(report.max_imag_residue)
                << " discarded\n";
    std::cout << "eme " << fmt_g(report.eme[0]) << ' ' << fmt_g(report.eme[1]) << ' '
              << fmt_g(report.eme[2]) << "\n";
  }

  const std::string metrics_path =
      o.metrics_path.empty() ? o.output + ".metrics.csv" : o.metrics_path;
  write_metric_csv(metrics_path, {row});
  manifest.add("metrics_csv", metrics_path);
  manifest.add("wall_ms", watch.ms());
  manifest.write(o.manifest_path.empty() ? o.output + ".manifest.txt" : o.manifest_path);
  return 0;
}

// ---- metric ------------------------------------------------------------------

int run_metric(const std::string& input, const std::string& mode, const CommonOpts& common,
               const std::string& out_path) {
  apply_threads(common, nullptr);
  const auto [bh, bw] = parse_blocks(common.blocks);
  const bool rqi = input.size() > 4 && input.substr(input.size() - 4) == ".rqi";
  std::string effective = mode;
  if (effective == "auto") effective = rqi ? "ceme" : "eme";

  MetricRow row;
  row.image = input;
  if (effective == "ceme") {
    double value = 0.0;
    if (rqi) {
      qalpha_realq* q = nullptr;
      check(qalpha_realq_load(input.c_str(), &q), "loading " + input);
      RealqPtr realq(q);
      check(qalpha_realq_ceme(realq.get(), bw, bh, &value), "ceme");
    } else {
      ImagePtr img = prepare_input(input, common.downscale);
      check(qalpha_image_ceme(img.get(), bw, bh, &value), "ceme");
    }
    row.method = "ceme";
    row.ceme = fmt_g(value);
    std::cout << "ceme " << fmt_g(value) << "\n";
  } else if (effective == "eme") {
    if (rqi) usage_error("eme needs a raster image");
    ImagePtr img = prepare_input(input, common.downscale);
    double eme[4] = {0, 0, 0, 0};
    check(qalpha_image_eme(img.get(), bw, bh, eme), "eme");
    row.method = "eme";
    for (int ch = 0; ch < 3; ++ch) row.eme[ch] = fmt_g(eme[ch]);
    std::cout << "eme " << fmt_g(eme[0]) << ' ' << fmt_g(eme[1]) << ' ' << fmt_g(eme[2])
              << "\n";
  } else {
    usage_error("mode must be auto, ceme or eme");
  }
  if (!out_path.empty()) write_metric_csv(out_path, {row});
  return 0;
}

// ---- histogram ----------------------------------------------------------------

int run_histogram(const std::string& input, const std::string& out_path) {
  ImagePtr img = load_image(input);
  const int channels = qalpha_image_channels(img.get());
  std::vector<uint64_t> counts(static_cast<std::size_t>(channels) * 256);
  check(qalpha_image_histogram(img.get(), counts.data()), "histogram");

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty() && out_path != "-") {
    file.open(out_path);
    if (!file) {
      std::cerr << "qalpha: cannot write " << out_path << "\n";
      return 2;
    }
    out = &file;
  }
  *out << "bin";
  for (int ch = 1; ch <= channels; ++ch) *out << ",ch" << ch;
  *out << "\n";
  for (int bin = 0; bin < 256; ++bin) {
    *out << bin;
    for (int ch = 0; ch < channels; ++ch)
      *out << ',' << counts[static_cast<std::size_t>(ch) * 256 + bin];
    *out << "\n";
  }
  return 0;
}

// ---- sweep ---------------------------------------------------------------------

struct SweepOpts {
  std::string input;
  std::string method = "qdft";
  std::string fix;
  std::vector<std::string> vary;
  std::string out_path;
  std::string manifest_path;
  CommonOpts common;
};

void parse_vary(const std::string& spec, char* name, size_t name_len, double* start,
                double* stop, double* step) {
  // name:start:stop[:step], step defaults to 0.02
  std::vector<std::string> parts;
  std::size_t begin = 0;
  for (std::size_t i = 0; i <= spec.size(); ++i) {
    if (i == spec.size() || spec[i] == ':') {
      parts.push_back(spec.substr(begin, i - begin));
      begin = i + 1;
    }
  }
  if (parts.size() != 3 && parts.size() != 4)
    usage_error("--vary must look like alpha:0.5:1[:0.02]");
  std::snprintf(name, name_len, "%s", parts[0].c_str());
  try {
    *start = std::stod(parts[1]);
    *stop = std::stod(parts[2]);
    *step = parts.size() == 4 ? std::stod(parts[3]) : 0.02;
  } catch (const std::exception&) {
    usage_error("--vary must look like alpha:0.5:1[:0.02]");
  }
}

int run_sweep(const SweepOpts& o) {
  Stopwatch watch;
  Manifest manifest;
  manifest.add("tool", std::string("qalpha ") + qalpha_version());
  manifest.add("command", "sweep");
  manifest.add("input", o.input);
  apply_threads(o.common, &manifest);

  ImagePtr img = prepare_input(o.input, o.common.downscale);
  if (o.common.negative) {
    qalpha_image* neg = nullptr;
    check(qalpha_image_negate(img.get(), &neg), "negating");
    img.reset(neg);
  }
  if (parse_space(o.common.colorspace) == QALPHA_SPACE_XYZ) {
    qalpha_image* xyz = nullptr;
    check(qalpha_image_convert(img.get(), "xyz", &xyz), "converting to xyz");
    img.reset(xyz);
  }

  qalpha_sweep_spec spec;
  qalpha_sweep_defaults(&spec);
  spec.method = parse_method(o.method);
  spec.even_mode = parse_even(o.common.even);
  const auto [bh, bw] = parse_blocks(o.common.blocks);
  spec.block_h = bh;
  spec.block_w = bw;
  spec.log_base = parse_log_base(o.common.log_base);

  const std::size_t eq = o.fix.find('=');
  if (eq == std::string::npos) usage_error("--fix must look like lambda=0.58");
  std::snprintf(spec.fixed_name, sizeof(spec.fixed_name), "%s", o.fix.substr(0, eq).c_str());
  try {
    spec.fixed_value = std::stod(o.fix.substr(eq + 1));
  } catch (const std::exception&) {
    usage_error("--fix must look like lambda=0.58");
  }
  if (o.vary.size() != 2) usage_error("exactly two --vary axes are required");
  parse_vary(o.vary[0], spec.vary1_name, sizeof(spec.vary1_name), &spec.vary1_start,
             &spec.vary1_stop, &spec.vary1_step);
  parse_vary(o.vary[1], spec.vary2_name, sizeof(spec.vary2_name), &spec.vary2_start,
             &spec.vary2_stop, &spec.vary2_step);

  qalpha_surface* raw = nullptr;
  check(qalpha_sweep(img.get(), &spec, &raw), "sweeping");
  SurfacePtr surface(raw);

  const std::string out_path = o.out_path.empty() ? o.input + ".surface.csv" : o.out_path;
  check(qalpha_surface_write_csv(surface.get(), out_path.c_str()), "writing " + out_path);

  manifest.add("method", method_name(spec.method));
  manifest.add("even", even_name(spec.even_mode));
  manifest.add("colorspace", o.common.colorspace);
  manifest.add("negative", o.common.negative ? "true" : "false");
  manifest.add("fix", o.fix);
  manifest.add("vary1", o.vary[0]);
  manifest.add("vary2", o.vary[1]);
  manifest.add("blocks", o.common.blocks);
  manifest.add("log_base", o.common.log_base);
  manifest.add("surface_csv", out_path);

  const int metrics = qalpha_surface_metric_count(surface.get());
  for (int m = 0; m < metrics; ++m) {
    double v1 = 0, v2 = 0, value = 0;
    check(qalpha_surface_argmax(surface.get(), m, &v1, &v2, &value), "argmax");
    const std::string name = qalpha_surface_metric_name(surface.get(), m);
    std::cout << "argmax " << name << ' ' << spec.vary1_name << '=' << fmt_g(v1) << ' '
              << spec.vary2_name << '=' << fmt_g(v2) << ' ' << name << '=' << fmt_g(value)
              << "\n";
    manifest.add("argmax_" + name, std::string(spec.vary1_name) + "=" + fmt_g(v1) + " " +
                                       spec.vary2_name + "=" + fmt_g(v2) + " value=" +
                                       fmt_g(value));
  }
  manifest.add("wall_ms", watch.ms());
  manifest.write(o.manifest_path.empty() ? out_path + ".manifest.txt" : o.manifest_path);
  return 0;
}

// ---- optimize --------------------------------------------------------------------

struct OptimizeOpts {
  std::string input;
  int population = 30, generations = 40, elitism = 2;
  double crossover = 0.9, mutation = 0.15, sigma = 0.05;
  std::uint64_t seed = 0;
  double alpha_min = 0.01, alpha_max = 1.0;
  double beta_min = 0.0, beta_max = 3.0;
  double lambda_min = 0.01, lambda_max = 3.0;
  bool include_post = false;
  std::string post = "none";
  double c = 1.0, p = 1.0, gamma = 1.0;
  std::string post_apply = "magnitude";
  std::string log_path = "ga_log.csv";
  std::string manifest_path = "optimize.manifest.txt";
  CommonOpts common;
};

int run_optimize(const OptimizeOpts& o) {
  Stopwatch watch;
  Manifest manifest;
  manifest.add("tool", std::string("qalpha ") + qalpha_version());
  manifest.add("command", "optimize");
  manifest.add("input", o.input);
  apply_threads(o.common, &manifest);

  ImagePtr img = prepare_input(o.input, o.common.downscale);
  if (o.common.negative) {
    qalpha_image* neg = nullptr;
    check(qalpha_image_negate(img.get(), &neg), "negating");
    img.reset(neg);
  }
  if (parse_space(o.common.colorspace) == QALPHA_SPACE_XYZ) {
    qalpha_image* xyz = nullptr;
    check(qalpha_image_convert(img.get(), "xyz", &xyz), "converting to xyz");
    img.reset(xyz);
  }

  qalpha_ga_config cfg;
  qalpha_ga_defaults(&cfg);
  cfg.population = o.population;
  cfg.generations = o.generations;
  cfg.elitism = o.elitism;
  cfg.crossover_rate = o.crossover;
  cfg.mutation_rate = o.mutation;
  cfg.mutation_sigma_frac = o.sigma;
  cfg.seed = o.seed;
  cfg.alpha_min = o.alpha_min;
  cfg.alpha_max = o.alpha_max;
  cfg.beta_min = o.beta_min;
  cfg.beta_max = o.beta_max;
  cfg.lambda_min = o.lambda_min;
  cfg.lambda_max = o.lambda_max;
  cfg.even_mode = parse_even(o.common.even);
  const auto [bh, bw] = parse_blocks(o.common.blocks);
  cfg.block_h = bh;
  cfg.block_w = bw;
  cfg.log_base = parse_log_base(o.common.log_base);
  cfg.include_post = o.include_post ? 1 : 0;
  cfg.post.kind = parse_post(o.post);
  cfg.post.c = o.c;
  cfg.post.p = o.p;
  cfg.post.gamma = o.gamma;
  cfg.post_apply = parse_apply(o.post_apply);

  qalpha_params best;
  double best_ceme = 0.0;
  check(qalpha_optimize(img.get(), &cfg, &best, &best_ceme, o.log_path.c_str()),
        "optimizing");

  std::cout << "best alpha=" << fmt_g(best.alpha) << " beta=" << fmt_g(best.beta)
            << " lambda=" << fmt_g(best.lambda) << " ceme=" << fmt_g(best_ceme) << "\n";

  manifest.add("population", static_cast<long long>(cfg.population));
  manifest.add("generations", static_cast<long long>(cfg.generations));
  manifest.add("elitism", static_cast<long long>(cfg.elitism));
  manifest.add("crossover_rate", cfg.crossover_rate);
  manifest.add("mutation_rate", cfg.mutation_rate);
  manifest.add("mutation_sigma_frac", cfg.mutation_sigma_frac);
  manifest.add("rng_seed", static_cast<long long>(cfg.seed));
  manifest.add("bounds_alpha", fmt_g(cfg.alpha_min) + ".." + fmt_g(cfg.alpha_max));
  manifest.add("bounds_beta", fmt_g(cfg.beta_min) + ".." + fmt_g(cfg.beta_max));
  manifest.add("bounds_lambda", fmt_g(cfg.lambda_min) + ".." + fmt_g(cfg.lambda_max));
  manifest.add("even", even_name(cfg.even_mode));
  manifest.add("colorspace", o.common.colorspace);
  manifest.add("blocks", o.common.blocks);
  manifest.add("log_base", o.common.log_base);
  manifest.add("include_post", o.include_post ? "true" : "false");
  manifest.add("post", post_name(cfg.post.kind));
  manifest.add("ga_log", o.log_path);
  manifest.add("best_alpha", best.alpha);
  manifest.add("best_beta", best.beta);
  manifest.add("best_lambda", best.lambda);
  manifest.add("best_ceme", best_ceme);
  manifest.add("wall_ms", watch.ms());
  manifest.write(o.manifest_path);
  return 0;
}

// ---- compare ----------------------------------------------------------------------

struct CompareOpts {
  std::string input, outdir;
  double alpha = 0.9, beta = 0.5, lambda = 0.5;
  double alpha_ch[3] = {NAN, NAN, NAN};
  double beta_ch[3] = {NAN, NAN, NAN};
  double lambda_ch[3] = {NAN, NAN, NAN};
  std::string post = "gamma";
  double c = 1.0, p = 3.3, gamma = 1.15;
  CommonOpts common;
};

int run_compare(const CompareOpts& o) {
  Stopwatch watch;
  Manifest manifest;
  manifest.add("tool", std::string("qalpha ") + qalpha_version());
  manifest.add("command", "compare");
  manifest.add("input", o.input);
  apply_threads(o.common, &manifest);

  std::error_code ec;
  fs::create_directories(o.outdir, ec);
  if (ec) {
    std::cerr << "qalpha: cannot create " << o.outdir << "\n";
    return 2;
  }

  ImagePtr original = prepare_input(o.input, o.common.downscale);
  const auto [bh, bw] = parse_blocks(o.common.blocks);
  const fs::path dir(o.outdir);

  const std::vector<std::string> generated = {"original.ppm", "qdft.ppm",   "channel.ppm",
                                              "log.ppm",      "gamma.ppm",  "histeq.ppm"};
  std::vector<MetricRow> rows;

  // original
  save_image(original.get(), (dir / "original.ppm").string());
  rows.push_back(score_raster(original.get(), "original.ppm", "original", bh, bw));

  const auto enhance_to = [&](const qalpha_config& cfg, const std::string& name,
                              const char* method) {
    qalpha_image* out_raw = nullptr;
    qalpha_realq* realq_raw = nullptr;
    qalpha_report report;
    check(qalpha_enhance(original.get(), &cfg, &out_raw, &realq_raw, &report),
          "enhancing " + name);
    ImagePtr out(out_raw);
    RealqPtr realq(realq_raw);
    save_image(out.get(), (dir / name).string());
    MetricRow row = score_raster(out.get(), name, method, bh, bw);
    if (cfg.method == QALPHA_METHOD_QDFT && !std::isnan(report.ceme))
      row.ceme = fmt_g(report.ceme);  // scored with its true scalar plane
    return row;
  };

  EnhanceOpts base;
  base.method = "qdft";
  base.alpha = o.alpha;
  base.beta = o.beta;
  base.lambda = o.lambda;
  base.post = o.post;
  base.c = o.c;
  base.p = o.p;
  base.gamma = o.gamma;
  base.common = o.common;

  // qdft-enhanced
  qalpha_config cfg;
  fill_config(base, &cfg);
  {
    MetricRow row = enhance_to(cfg, "qdft.ppm", "qdft");
    row.alpha = fmt_g(o.alpha);
    row.beta = fmt_g(o.beta);
    row.lambda = fmt_g(o.lambda);
    row.post = o.post;
    rows.push_back(row);
  }

  // channel-enhanced
  EnhanceOpts chan = base;
  chan.method = "dft-channel";
  for (int ch = 0; ch < 3; ++ch) {
    chan.alpha_ch[ch] = o.alpha_ch[ch];
    chan.beta_ch[ch] = o.beta_ch[ch];
    chan.lambda_ch[ch] = o.lambda_ch[ch];
  }
  fill_config(chan, &cfg);
  {
    MetricRow row = enhance_to(cfg, "channel.ppm", "dft-channel");
    row.alpha = fmt_g(o.alpha);
    row.beta = fmt_g(o.beta);
    row.lambda = fmt_g(o.lambda);
    row.post = o.post;
    rows.push_back(row);
  }

  // log-only and gamma-only baselines: identity rooting plus the post stage
  EnhanceOpts plain = base;
  plain.alpha = 1.0;
  plain.beta = 0.0;
  plain.lambda = 1.0;
  plain.post = "log";
  plain.post_apply = "per-plane";
  fill_config(plain, &cfg);
  {
    MetricRow row = enhance_to(cfg, "log.ppm", "log-only");
    row.post = "log";
    rows.push_back(row);
  }
  plain.post = "gamma";
  fill_config(plain, &cfg);
  {
    MetricRow row = enhance_to(cfg, "gamma.ppm", "gamma-only");
    row.post = "gamma";
    rows.push_back(row);
  }

  // histogram equalization baseline
  {
    qalpha_image* eq_raw = nullptr;
    check(qalpha_image_equalize(original.get(), &eq_raw), "equalizing");
    ImagePtr eq(eq_raw);
    save_image(eq.get(), (dir / "histeq.ppm").string());
    rows.push_back(score_raster(eq.get(), "histeq.ppm", "histeq", bh, bw));
  }

  // externally produced images dropped into the bundle are scored, not made
  std::vector<std::string> external;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    const std::string ext = entry.path().extension().string();
    if (ext != ".ppm" && ext != ".png") continue;
    if (std::find(generated.begin(), generated.end(), name) != generated.end()) continue;
    external.push_back(name);
  }
  std::sort(external.begin(), external.end());
  for (const std::string& name : external) {
    ImagePtr ext_img = load_image((dir / name).string());
    rows.push_back(score_raster(ext_img.get(), name, "external", bh, bw));
  }

  write_metric_csv((dir / "metrics.csv").string(), rows);
  manifest.add("outdir", o.outdir);
  manifest.add("generated", std::to_string(generated.size()));
  manifest.add("external", std::to_string(external.size()));
  manifest.add("metrics_csv", (dir / "metrics.csv").string());
  manifest.add("wall_ms", watch.ms());
  manifest.write((dir / "compare.manifest.txt").string());

  std::cout << "bundle " << o.outdir << ": " << generated.size() << " generated, "
            << external.size() << " external\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Color image enhancement by modified alpha-rooting in the quaternion and "
               "complex Fourier domains"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("qalpha ") + qalpha_version());

  EnhanceOpts eo;
  CLI::App* enhance = app.add_subcommand("enhance", "Enhance one image");
  enhance->add_option("input", eo.input, "Input image (.ppm/.png)")->required();
  enhance->add_option("output", eo.output, "Output image (.ppm/.png)")->required();
  enhance->add_option("--method", eo.method, "qdft | dft-channel");
  enhance->add_option("--alpha", eo.alpha, "Rooting exponent in (0,1]");
  enhance->add_option("--beta", eo.beta, "Magnitude-weight exponent >= 0");
  enhance->add_option("--lambda", eo.lambda, "Magnitude-weight scale > 0");
  enhance->add_option("--alpha-r", eo.alpha_ch[0], "Channel 1 alpha (dft-channel)");
  enhance->add_option("--alpha-g", eo.alpha_ch[1], "Channel 2 alpha (dft-channel)");
  enhance->add_option("--alpha-b", eo.alpha_ch[2], "Channel 3 alpha (dft-channel)");
  enhance->add_option("--beta-r", eo.beta_ch[0], "Channel 1 beta (dft-channel)");
  enhance->add_option("--beta-g", eo.beta_ch[1], "Channel 2 beta (dft-channel)");
  enhance->add_option("--beta-b", eo.beta_ch[2], "Channel 3 beta (dft-channel)");
  enhance->add_option("--lambda-r", eo.lambda_ch[0], "Channel 1 lambda (dft-channel)");
  enhance->add_option("--lambda-g", eo.lambda_ch[1], "Channel 2 lambda (dft-channel)");
  enhance->add_option("--lambda-b", eo.lambda_ch[2], "Channel 3 lambda (dft-channel)");
  enhance->add_option("--post", eo.post, "none | log | gamma | histeq");
  enhance->add_option("--c", eo.c, "Post-transform scale");
  enhance->add_option("--p", eo.p, "Log exponent");
  enhance->add_option("--gamma", eo.gamma, "Gamma exponent");
  enhance->add_option("--post-apply", eo.post_apply, "per-plane | magnitude");
  enhance->add_option("--size-policy", eo.size_policy, "auto | direct | pad");
  enhance->add_option("--save-realq", eo.save_realq, "Also write the four-plane image (.rqi)");
  enhance->add_option("--manifest", eo.manifest_path, "Manifest path");
  enhance->add_option("--metrics-csv", eo.metrics_path, "Metric CSV path");
  add_common(enhance, eo.common);

  std::string metric_input, metric_mode = "auto", metric_out;
  CommonOpts metric_common;
  CLI::App* metric = app.add_subcommand("metric", "Score an image (CEME or per-channel EME)");
  metric->add_option("input", metric_input, "Image (.ppm/.png) or four-plane file (.rqi)")
      ->required();
  metric->add_option("--mode", metric_mode, "auto | ceme | eme");
  metric->add_option("-o,--out", metric_out, "Metric CSV path");
  add_common(metric, metric_common, /*with_space=*/false);

  std::string hist_input, hist_out;
  CLI::App* hist = app.add_subcommand("histogram", "Emit per-channel 256-bin counts as CSV");
  hist->add_option("input", hist_input, "Input image")->required();
  hist->add_option("-o,--out", hist_out, "CSV path (default stdout)");

  SweepOpts so;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Metric surface over two parameters");
  sweep_cmd->add_option("input", so.input, "Input image")->required();
  sweep_cmd->add_option("--method", so.method, "qdft | dft-channel");
  sweep_cmd->add_option("--fix", so.fix, "Fixed parameter, e.g. lambda=0.58")->required();
  sweep_cmd->add_option("--vary", so.vary, "Axis spec name:start:stop:step (twice)")
      ->expected(1, 2);
  sweep_cmd->add_option("-o,--out", so.out_path, "Surface CSV path");
  sweep_cmd->add_option("--manifest", so.manifest_path, "Manifest path");
  add_common(sweep_cmd, so.common);

  OptimizeOpts oo;
  CLI::App* opt = app.add_subcommand("optimize", "Genetic search maximizing CEME");
  opt->add_option("input", oo.input, "Input image")->required();
  opt->add_option("--pop", oo.population, "Population size");
  opt->add_option("--gens", oo.generations, "Generations");
  opt->add_option("--elitism", oo.elitism, "Elite individuals per generation");
  opt->add_option("--crossover", oo.crossover, "Crossover rate");
  opt->add_option("--mutation", oo.mutation, "Per-gene mutation rate");
  opt->add_option("--sigma", oo.sigma, "Mutation sigma as a fraction of each bound width");
  opt->add_option("--seed", oo.seed, "RNG seed");
  opt->add_option("--alpha-min", oo.alpha_min);
  opt->add_option("--alpha-max", oo.alpha_max);
  opt->add_option("--beta-min", oo.beta_min);
  opt->add_option("--beta-max", oo.beta_max);
  opt->add_option("--lambda-min", oo.lambda_min);
  opt->add_option("--lambda-max", oo.lambda_max);
  opt->add_flag("--include-post", oo.include_post, "Score after the post transform");
  opt->add_option("--post", oo.post, "none | log | gamma | histeq");
  opt->add_option("--c", oo.c, "Post-transform scale");
  opt->add_option("--p", oo.p, "Log exponent");
  opt->add_option("--gamma", oo.gamma, "Gamma exponent");
  opt->add_option("--post-apply", oo.post_apply, "per-plane | magnitude");
  opt->add_option("--log", oo.log_path, "Generation log CSV path");
  opt->add_option("--manifest", oo.manifest_path, "Manifest path");
  add_common(opt, oo.common);

  CompareOpts co;
  CLI::App* cmp = app.add_subcommand("compare", "Side-by-side enhancement bundle");
  cmp->add_option("input", co.input, "Input image")->required();
  cmp->add_option("outdir", co.outdir, "Bundle directory")->required();
  cmp->add_option("--alpha", co.alpha);
  cmp->add_option("--beta", co.beta);
  cmp->add_option("--lambda", co.lambda);
  cmp->add_option("--alpha-r", co.alpha_ch[0]);
  cmp->add_option("--alpha-g", co.alpha_ch[1]);
  cmp->add_option("--alpha-b", co.alpha_ch[2]);
  cmp->add_option("--beta-r", co.beta_ch[0]);
  cmp->add_option("--beta-g", co.beta_ch[1]);
  cmp->add_option("--beta-b", co.beta_ch[2]);
  cmp->add_option("--lambda-r", co.lambda_ch[0]);
  cmp->add_option("--lambda-g", co.lambda_ch[1]);
  cmp->add_option("--lambda-b", co.lambda_ch[2]);
  cmp->add_option("--post", co.post, "Post transform for the enhanced images");
  cmp->add_option("--c", co.c);
  cmp->add_option("--p", co.p);
  cmp->add_option("--gamma", co.gamma);
  add_common(cmp, co.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*enhance) return run_enhance(eo);
  if (*metric) return run_metric(metric_input, metric_mode, metric_common, metric_out);
  if (*hist) return run_histogram(hist_input, hist_out);
  if (*sweep_cmd) return run_sweep(so);
  if (*opt) return run_optimize(oo);
  if (*cmp) return run_compare(co);
  return 1;
}
