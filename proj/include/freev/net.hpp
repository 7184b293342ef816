#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "freev/melbank.hpp"
#include "freev/phase.hpp"
#include "freev/prior.hpp"
#include "freev/spectrogram.hpp"

namespace freev {

// 1-D convolution over the time axis, zero-padded "same".
// taps[k] is the (out x in) matrix applied at time offset k - (K-1)/2.
struct Conv1dWeights {
  std::vector<Mat> taps;
  Vec bias;

  int in_dim() const { return taps.empty() ? 0 : static_cast<int>(taps[0].cols()); }
  int out_dim() const { return taps.empty() ? 0 : static_cast<int>(taps[0].rows()); }
  int kernel() const { return static_cast<int>(taps.size()); }
};

Mat conv1d(const Mat& x, const Conv1dWeights& w);  // x: T x in -> T x out

// dwconv7 -> layernorm -> pw expand -> GELU -> GRN -> pw project, residual.
struct ConvNeXtV2BlockWeights {
  Mat dw_weight;  // dim x kernel (depthwise taps per channel)
  Vec dw_bias;    // dim
  Vec norm_gamma, norm_beta;  // dim
  Mat pw1_weight;  // hidden x dim
  Vec pw1_bias;    // hidden
  Vec grn_gamma, grn_beta;  // hidden
  Mat pw2_weight;  // dim x hidden
  Vec pw2_bias;    // dim

  int dim() const { return static_cast<int>(dw_weight.rows()); }
  int hidden() const { return static_cast<int>(pw1_weight.rows()); }
  int kernel() const { return static_cast<int>(dw_weight.cols()); }
  std::size_t parameter_count() const;
};

Mat convnext_v2_block(const Mat& x, const ConvNeXtV2BlockWeights& w);

struct NetManifest {
  int format_version = 1;
  int n_mels = 80;
  int n_freq = 513;
  int psp_dim = 512;
  int psp_blocks = 8;
  int asp_blocks = 1;
  int hidden = 1536;
  int kernel = 7;

  void validate() const;
};

struct GeneratorWeights {
  NetManifest manifest;
  Conv1dWeights psp_in;                              // n_mels -> psp_dim
  std::vector<ConvNeXtV2BlockWeights> psp_blocks;    // dim = psp_dim
  Conv1dWeights psp_out_r, psp_out_i;                // psp_dim -> n_freq
  std::vector<ConvNeXtV2BlockWeights> asp_blocks;    // dim = n_freq

  std::size_t parameter_count() const;
};

// log-domain residual correction on the frozen pseudo-inverse prior:
// block(log_compress(estimate_prior(x, fb, PI-abs))). No output convolution.
AmplitudeSpectrogram asp_forward(const MelSpectrogram& x, const MelFilterbank& fb,
                                 const GeneratorWeights& w);

PhaseSpectrogram psp_forward(const MelSpectrogram& x, const SpectralConfig& cfg,
                             const GeneratorWeights& w);

struct VocodeResult {
  Waveform waveform;
  AmplitudeSpectrogram pred_log_amp;
  PhaseSpectrogram pred_phase;
  AmplitudeSpectrogram prior_log_amp;
};

// phase_override substitutes the PSP output (ground-truth-phase injection for
// diagnostics); pass nullptr for normal operation.
VocodeResult vocode(const MelSpectrogram& x, const MelFilterbank& fb,
                    const GeneratorWeights& w,
                    const PhaseSpectrogram* phase_override = nullptr);

// Reproducible fan-in-scaled pseudo-random weights (no trained checkpoint is
// assumed anywhere in this project).
GeneratorWeights gen_weights(std::uint64_t seed, const NetManifest& manifest = {});

// Parameter accounting for the shape comparison against an APNet2-style ASP
// (input conv + 8 blocks + output conv) built from the same primitives.
std::size_t param_count_freev(const NetManifest& m);
std::size_t param_count_apnet2_shaped(const NetManifest& m);

struct ParamReport {
  std::size_t psp_total = 0;
  std::size_t asp_total = 0;
  std::size_t total = 0;
  std::size_t apnet2_shaped_total = 0;
};
ParamReport param_report(const GeneratorWeights& w);

}  // namespace freev
