#pragma once

#include <array>
#include <cmath>

#include "image.hpp"
#include "metrics.hpp"
#include "rooting.hpp"
#include "spatial.hpp"
#include "spectral.hpp"

namespace qalpha {

enum class Method { qdft, dft_channel };
enum class PostApply { per_plane, magnitude };

// Transform sizing for non-power-of-two images: direct evaluation keeps the
// exact size, padding embeds the image symmetrically in the next power of two
// and crops after the inverse (faster, alters results). automatic picks
// direct up to 128x128 pixels and padding above.
enum class SizePolicy { automatic, direct, pad };

struct PipelineConfig {
  Method method = Method::qdft;
  EvenMode even_mode = EvenMode::zero;
  ColorModel colorspace = ColorModel::rgb;  // processing space
  RootingParams rooting{};                  // qdft mode
  std::array<RootingParams, 3> channel_rooting{};  // dft_channel mode, one per channel
  PostTransform post{};
  PostApply post_apply = PostApply::magnitude;
  bool negative = false;
  BlockSpec blocks{};
  SizePolicy size_policy = SizePolicy::automatic;
};

struct PipelineResult {
  RasterImage image;   // final raster, values in [0, 255]
  RealQImage realq;    // final four-plane image scored by the metric
  double ceme = std::nan("");              // qdft mode
  std::array<double, 3> eme{std::nan(""), std::nan(""), std::nan("")};  // dft_channel mode
  double max_imag_residue = 0.0;           // dft_channel inverse residue
  bool residue_discarded = false;          // residue exceeded 1e-6 when dropped
};

// Staged flow: (negate) -> colorspace -> encode -> forward transform ->
// rooting -> inverse -> convert back -> rescale to 8-bit -> (post transform)
// -> (negate back). Errors are annotated with the failing stage.
PipelineResult run_pipeline(const RasterImage& img, const PipelineConfig& cfg);

}  // namespace qalpha
