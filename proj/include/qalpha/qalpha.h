/*
 * qalpha - color image enhancement by modified alpha-rooting in the two-side
 * 2-D quaternion DFT domain, with a channel-by-channel 2-D DFT mode, CEME/EME
 * contrast scoring, grid sweeps and a genetic parameter search.
 *
 * All functions return QALPHA_OK on success. On failure they return an error
 * code and leave a thread-local message readable via qalpha_last_error().
 * Objects are opaque handles owned by the caller; release them with the
 * matching *_free function.
 */

#ifndef QALPHA_H
#define QALPHA_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QALPHA_API __declspec(dllexport)
#elif defined(__GNUC__)
#define QALPHA_API __attribute__((visibility("default")))
#else
#define QALPHA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qalpha_status {
  QALPHA_OK = 0,
  QALPHA_ERR_ARG = 1,
  QALPHA_ERR_IO = 2,
  QALPHA_ERR_NUMERIC = 3
} qalpha_status;

QALPHA_API const char* qalpha_version(void);

/* Message for the most recent failure on this thread; empty if none. */
QALPHA_API const char* qalpha_last_error(void);

/* Caps internal parallelism. n <= 0 restores the hardware default. */
QALPHA_API void qalpha_set_threads(int n);

typedef struct qalpha_image qalpha_image;   /* planar raster, 3 or 4 channels */
typedef struct qalpha_realq qalpha_realq;   /* four-plane (e,R,G,B) real image */
typedef struct qalpha_surface qalpha_surface; /* metric grid from a sweep */

/* ---- images ----------------------------------------------------------- */

/* Format by extension: .ppm/.pnm (binary P6, maxval 255) or .png (8-bit RGB). */
QALPHA_API qalpha_status qalpha_image_load(const char* path, qalpha_image** out);
QALPHA_API qalpha_status qalpha_image_save(const qalpha_image* img, const char* path);
QALPHA_API void qalpha_image_free(qalpha_image* img);

QALPHA_API int qalpha_image_width(const qalpha_image* img);
QALPHA_API int qalpha_image_height(const qalpha_image* img);
QALPHA_API int qalpha_image_channels(const qalpha_image* img);

/* planes: `channels` arrays of width*height doubles, row-major. */
QALPHA_API qalpha_status qalpha_image_create(int width, int height, int channels,
                                             const double* const* planes, qalpha_image** out);
/* Copies one plane into out (width*height doubles). */
QALPHA_API qalpha_status qalpha_image_plane(const qalpha_image* img, int channel, double* out);

QALPHA_API qalpha_status qalpha_image_negate(const qalpha_image* img, qalpha_image** out);
/* colorspace: "rgb" or "xyz" (linear sRGB/D65 matrix, no gamma). */
QALPHA_API qalpha_status qalpha_image_convert(const qalpha_image* img, const char* colorspace,
                                              qalpha_image** out);
QALPHA_API qalpha_status qalpha_image_downscale(const qalpha_image* img, int max_side,
                                                qalpha_image** out);
QALPHA_API qalpha_status qalpha_image_equalize(const qalpha_image* img, qalpha_image** out);

/* counts: channels*256 entries, channel-major. */
QALPHA_API qalpha_status qalpha_image_histogram(const qalpha_image* img, uint64_t* counts);
/* CSV with header "bin,ch1,..."; one row per bin. */
QALPHA_API qalpha_status qalpha_image_histogram_csv(const qalpha_image* img, const char* path);

/* ---- enhancement ------------------------------------------------------ */

enum {
  QALPHA_METHOD_QDFT = 0,
  QALPHA_METHOD_DFT_CHANNEL = 1
};
enum {
  QALPHA_EVEN_ZERO = 0,
  QALPHA_EVEN_GRAY = 1,
  QALPHA_EVEN_CHANNEL4 = 2
};
enum {
  QALPHA_SPACE_RGB = 0,
  QALPHA_SPACE_XYZ = 1
};
enum {
  QALPHA_POST_NONE = 0,
  QALPHA_POST_LOG = 1,
  QALPHA_POST_GAMMA = 2,
  QALPHA_POST_HISTEQ = 3
};
enum {
  QALPHA_APPLY_PER_PLANE = 0,
  QALPHA_APPLY_MAGNITUDE = 1
};
enum {
  QALPHA_SIZE_AUTO = 0,
  QALPHA_SIZE_DIRECT = 1,
  QALPHA_SIZE_PAD = 2
};

/* 0 < alpha <= 1, beta >= 0, lambda > 0; log_base 0 selects the natural
 * logarithm in the magnitude weight. */
typedef struct qalpha_params {
  double alpha;
  double beta;
  double lambda;
  double log_base;
} qalpha_params;

typedef struct qalpha_post {
  int kind; /* QALPHA_POST_* */
  double c;
  double p;
  double gamma;
} qalpha_post;

typedef struct qalpha_config {
  int method;      /* QALPHA_METHOD_* */
  int even_mode;   /* QALPHA_EVEN_* */
  int colorspace;  /* QALPHA_SPACE_*: processing space */
  int post_apply;  /* QALPHA_APPLY_*; magnitude requires the qdft method */
  int size_policy; /* QALPHA_SIZE_* */
  int negative;    /* enhance the negative, re-negate at the end */
  qalpha_params rooting;            /* qdft mode */
  qalpha_params channel_rooting[3]; /* dft-channel mode */
  qalpha_post post;
  int block_w, block_h; /* metric block size */
} qalpha_config;

QALPHA_API void qalpha_config_defaults(qalpha_config* cfg);

typedef struct qalpha_report {
  double ceme;               /* qdft mode; NaN otherwise */
  double eme[3];             /* dft-channel mode; NaN otherwise */
  double max_imag_residue;   /* dft-channel inverse residue before discarding */
  int residue_discarded;     /* nonzero if the residue exceeded 1e-6 */
} qalpha_report;

/* Runs the full pipeline. out_realq (optional) receives the four-plane image
 * the metric was computed on; report (optional) receives the scores. */
QALPHA_API qalpha_status qalpha_enhance(const qalpha_image* img, const qalpha_config* cfg,
                                        qalpha_image** out_img, qalpha_realq** out_realq,
                                        qalpha_report* report);

/* ---- four-plane images ------------------------------------------------ */

QALPHA_API qalpha_status qalpha_realq_create(int width, int height, const double* e,
                                             const double* r, const double* g, const double* b,
                                             qalpha_realq** out);
QALPHA_API qalpha_status qalpha_realq_save(const qalpha_realq* q, const char* path);
QALPHA_API qalpha_status qalpha_realq_load(const char* path, qalpha_realq** out);
QALPHA_API void qalpha_realq_free(qalpha_realq* q);
QALPHA_API int qalpha_realq_width(const qalpha_realq* q);
QALPHA_API int qalpha_realq_height(const qalpha_realq* q);
/* Copies the requested planes; any destination may be NULL. */
QALPHA_API qalpha_status qalpha_realq_planes(const qalpha_realq* q, double* e, double* r,
                                             double* g, double* b);

/* ---- metrics ----------------------------------------------------------- */

QALPHA_API qalpha_status qalpha_realq_ceme(const qalpha_realq* q, int block_w, int block_h,
                                           double* out);
/* CEME of a raster with a zero scalar plane. */
QALPHA_API qalpha_status qalpha_image_ceme(const qalpha_image* img, int block_w, int block_h,
                                           double* out);
/* Per-channel EME; out must hold qalpha_image_channels(img) doubles. */
QALPHA_API qalpha_status qalpha_image_eme(const qalpha_image* img, int block_w, int block_h,
                                          double* out);

/* ---- parameter sweep --------------------------------------------------- */

typedef struct qalpha_sweep_spec {
  int method;    /* QALPHA_METHOD_* */
  int even_mode; /* QALPHA_EVEN_*, qdft only */
  char fixed_name[16];
  double fixed_value;
  char vary1_name[16];
  double vary1_start, vary1_stop, vary1_step;
  char vary2_name[16];
  double vary2_start, vary2_stop, vary2_step;
  int block_w, block_h;
  double log_base;
} qalpha_sweep_spec;

QALPHA_API void qalpha_sweep_defaults(qalpha_sweep_spec* spec);
QALPHA_API qalpha_status qalpha_sweep(const qalpha_image* img, const qalpha_sweep_spec* spec,
                                      qalpha_surface** out);
QALPHA_API void qalpha_surface_free(qalpha_surface* s);
QALPHA_API int qalpha_surface_metric_count(const qalpha_surface* s);
QALPHA_API const char* qalpha_surface_metric_name(const qalpha_surface* s, int metric);
QALPHA_API qalpha_status qalpha_surface_dims(const qalpha_surface* s, int* n1, int* n2);
QALPHA_API qalpha_status qalpha_surface_value(const qalpha_surface* s, int metric, int i1, int i2,
                                              double* out);
QALPHA_API qalpha_status qalpha_surface_argmax(const qalpha_surface* s, int metric, double* v1,
                                               double* v2, double* value);
QALPHA_API qalpha_status qalpha_surface_write_csv(const qalpha_surface* s, const char* path);

/* ---- genetic parameter search ------------------------------------------ */

typedef struct qalpha_ga_config {
  int population;
  int generations;
  int elitism;
  double crossover_rate;
  double mutation_rate;
  double mutation_sigma_frac; /* sigma as a fraction of each bound width */
  uint64_t seed;
  double alpha_min, alpha_max;
  double beta_min, beta_max;
  double lambda_min, lambda_max;
  int even_mode;
  int block_w, block_h;
  double log_base;
  int include_post; /* score after the post transform */
  qalpha_post post;
  int post_apply;
} qalpha_ga_config;

QALPHA_API void qalpha_ga_defaults(qalpha_ga_config* cfg);

/* Maximizes CEME of the qdft pipeline over (alpha, beta, lambda).
 * Deterministic for a fixed seed. best_ceme is a fresh evaluation at the
 * returned parameters. log_csv_path (optional) receives one
 * "generation,best,mean" row per evaluated generation. */
QALPHA_API qalpha_status qalpha_optimize(const qalpha_image* img, const qalpha_ga_config* cfg,
                                         qalpha_params* best, double* best_ceme,
                                         const char* log_csv_path);

#ifdef __cplusplus
}
#endif

#endif /* QALPHA_H */
