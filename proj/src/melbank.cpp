#include "freev/melbank.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace freev {

namespace {

// Slaney scale: linear below 1 kHz, log above.
constexpr double kFsp = 200.0 / 3.0;
constexpr double kMinLogHz = 1000.0;
constexpr double kMinLogMel = kMinLogHz / kFsp;
const double kLogStep = std::log(6.4) / 27.0;

void attach_pinv(MelFilterbank& fb) {
  Eigen::JacobiSVD<Mat> svd(fb.m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec& sv = svd.singularValues();
  const double cutoff = 1e-10 * sv.maxCoeff();
  Vec inv = Vec::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > cutoff) inv[i] = 1.0 / sv[i];
  fb.svd_u = svd.matrixU();
  fb.svd_s = sv;
  fb.svd_v = svd.matrixV();
  fb.svd_s_inv = inv;
  fb.m_pinv = fb.svd_v * inv.asDiagonal() * fb.svd_u.transpose();
}

}  // namespace

double hz_to_mel(double f, MelScale scale) {
  if (scale == MelScale::Htk) return 2595.0 * std::log10(1.0 + f / 700.0);
  if (f < kMinLogHz) return f / kFsp;
  return kMinLogMel + std::log(f / kMinLogHz) / kLogStep;
}

double mel_to_hz(double m, MelScale scale) {
  if (scale == MelScale::Htk) return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0);
  if (m < kMinLogMel) return m * kFsp;
  return kMinLogHz * std::exp(kLogStep * (m - kMinLogMel));
}

MelFilterbank build_filterbank(const SpectralConfig& sc, const MelConfig& mc) {
  sc.validate();
  mc.validate(sc.sample_rate);

  const int n_freq = sc.n_freq();
  const int n_mels = mc.n_mels;
  const double f_max = mc.effective_f_max(sc.sample_rate);

  const double mel_lo = hz_to_mel(mc.f_min, mc.scale);
  const double mel_hi = hz_to_mel(f_max, mc.scale);
  Vec hz_pts(n_mels + 2);
  for (int i = 0; i < n_mels + 2; ++i)
    hz_pts[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (n_mels + 1), mc.scale);

  Mat m = Mat::Zero(n_mels, n_freq);
  for (int i = 0; i < n_mels; ++i) {
    const double f_lo = hz_pts[i], f_c = hz_pts[i + 1], f_hi = hz_pts[i + 2];
    const double up = std::max(f_c - f_lo, 1e-12);
    const double down = std::max(f_hi - f_c, 1e-12);
    const double gain = mc.norm == MelNorm::SlaneyArea ? 2.0 / (f_hi - f_lo) : 1.0;
    for (int k = 0; k < n_freq; ++k) {
      const double f = k * sc.sample_rate / sc.n_fft;
      const double w = std::min((f - f_lo) / up, (f_hi - f) / down);
      if (w > 0) m(i, k) = w * gain;
    }
  }

  MelFilterbank fb;
  fb.m = std::move(m);
  attach_pinv(fb);
  fb.mel_config = mc;
  fb.spectral_config = sc;
  return fb;
}

MelFilterbank filterbank_from_matrix(Mat m, const SpectralConfig& sc, const MelConfig& mc) {
  MelFilterbank fb;
  fb.m = std::move(m);
  attach_pinv(fb);
  fb.mel_config = mc;
  fb.spectral_config = sc;
  return fb;
}

MelSpectrogram apply_mel(const AmplitudeSpectrogram& a, const MelFilterbank& fb) {
  if (a.domain != AmpDomain::Linear)
    throw std::invalid_argument("apply_mel: amplitude must be in the linear domain");
  if (a.frames.cols() != fb.n_freq())
    throw std::invalid_argument("apply_mel: bin count does not match filterbank");
  MelSpectrogram x;
  x.domain = AmpDomain::Linear;
  x.frames = a.frames * fb.m.transpose();
  return x;
}

Mat log_compress(const Mat& x) {
  return x.unaryExpr([](double v) { return std::log(std::max(v, kAmpFloor)); });
}

Mat log_expand(const Mat& x) {
  return x.unaryExpr([](double v) { return std::exp(v); });
}

AmplitudeSpectrogram log_compress(const AmplitudeSpectrogram& a) {
  if (a.domain != AmpDomain::Linear)
    throw std::invalid_argument("log_compress: input already in log domain");
  return {log_compress(a.frames), AmpDomain::Log, a.config};
}

AmplitudeSpectrogram log_expand(const AmplitudeSpectrogram& a) {
  if (a.domain != AmpDomain::Log)
    throw std::invalid_argument("log_expand: input not in log domain");
  return {log_expand(a.frames), AmpDomain::Linear, a.config};
}

MelSpectrogram log_compress(const MelSpectrogram& x) {
  if (x.domain != AmpDomain::Linear)
    throw std::invalid_argument("log_compress: input already in log domain");
  return {log_compress(x.frames), AmpDomain::Log};
}

MelSpectrogram log_expand(const MelSpectrogram& x) {
  if (x.domain != AmpDomain::Log)
    throw std::invalid_argument("log_expand: input not in log domain");
  return {log_expand(x.frames), AmpDomain::Linear};
}

double log_spectral_rmse(const Mat& log_a, const Mat& log_b) {
  if (log_a.rows() != log_b.rows() || log_a.cols() != log_b.cols())
    throw std::invalid_argument("log_spectral_rmse: shape mismatch");
  if (log_a.size() == 0) throw std::invalid_argument("log_spectral_rmse: empty input");
  return std::sqrt((log_a - log_b).squaredNorm() / static_cast<double>(log_a.size()));
}

}  // namespace freev
