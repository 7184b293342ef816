#pragma once

#include "freev/spectrogram.hpp"

namespace freev {

// Numerical floor applied before any log and by every prior estimator.
constexpr double kAmpFloor = 1e-5;

double hz_to_mel(double f, MelScale scale);
double mel_to_hz(double m, MelScale scale);

// Triangular filterbank M (n_mels x n_freq) with its Moore-Penrose
// pseudo-inverse M+ (n_freq x n_mels), computed once via SVD with a
// 1e-10 * sigma_max singular-value cutoff. The SVD factors are kept so the
// least-squares prior route can re-run the solve without the cached product.
// Immutable after construction.
struct MelFilterbank {
  Mat m;
  Mat m_pinv;
  Mat svd_u;  // n_mels x r
  Vec svd_s;  // r (cutoff-filtered values kept as-is; see svd_s_inv)
  Mat svd_v;  // n_freq x r
  Vec svd_s_inv;
  MelConfig mel_config;
  SpectralConfig spectral_config;

  int n_mels() const { return static_cast<int>(m.rows()); }
  int n_freq() const { return static_cast<int>(m.cols()); }
};

MelFilterbank build_filterbank(const SpectralConfig& sc, const MelConfig& mc);

// Test hook: wrap an arbitrary matrix (e.g. identity) and compute its
// pseudo-inverse with the same cutoff rule.
MelFilterbank filterbank_from_matrix(Mat m, const SpectralConfig& sc, const MelConfig& mc);

// X = A * M^T per frame (frame-major). Linear-domain input only.
MelSpectrogram apply_mel(const AmplitudeSpectrogram& a, const MelFilterbank& fb);

// log(max(x, 1e-5)) elementwise and its exp inverse.
Mat log_compress(const Mat& x);
Mat log_expand(const Mat& x);
AmplitudeSpectrogram log_compress(const AmplitudeSpectrogram& a);
AmplitudeSpectrogram log_expand(const AmplitudeSpectrogram& a);
MelSpectrogram log_compress(const MelSpectrogram& x);
MelSpectrogram log_expand(const MelSpectrogram& x);

// RMSE over all cells of two equal-shape log-domain matrices. The single
// LAS-RMSE definition shared by the prior benchmark and the metric suite
// (natural log; the base only rescales).
double log_spectral_rmse(const Mat& log_a, const Mat& log_b);

}  // namespace freev
