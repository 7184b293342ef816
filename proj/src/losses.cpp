#include "freev/losses.hpp"

#include <stdexcept>

#include "freev/dsp.hpp"
#include "freev/phase.hpp"

namespace freev {

double amplitude_loss(const AmplitudeSpectrogram& pred, const AmplitudeSpectrogram& ref) {
  if (pred.domain != AmpDomain::Log || ref.domain != AmpDomain::Log)
    throw std::invalid_argument("amplitude_loss: both inputs must be in the log domain");
  if (pred.frames.rows() != ref.frames.rows() || pred.frames.cols() != ref.frames.cols())
    throw std::invalid_argument("amplitude_loss: shape mismatch");
  return (pred.frames - ref.frames).squaredNorm() / static_cast<double>(pred.frames.size());
}

PhaseLossTerms phase_losses(const PhaseSpectrogram& pred, const PhaseSpectrogram& ref) {
  if (pred.frames.rows() != ref.frames.rows() || pred.frames.cols() != ref.frames.cols())
    throw std::invalid_argument("phase_losses: shape mismatch");
  const Eigen::Index T = pred.frames.rows();
  const Eigen::Index F = pred.frames.cols();
  if (T < 2) throw std::invalid_argument("phase_losses: need >= 2 frames for the time difference");
  if (F < 2) throw std::invalid_argument("phase_losses: need >= 2 bins for the group delay");

  const Mat diff = pred.frames - ref.frames;
  PhaseLossTerms out;
  out.inst = anti_wrap(diff).mean();
  // first differences of the *difference* field equal the differences of the
  // per-argument first differences, so one subtraction suffices
  out.gd = anti_wrap(Mat(diff.rightCols(F - 1) - diff.leftCols(F - 1))).mean();
  out.ptd = anti_wrap(Mat(diff.bottomRows(T - 1) - diff.topRows(T - 1))).mean();
  return out;
}

StftLossTerms stft_losses(const ComplexSpectrogram& pred, const ComplexSpectrogram& ref) {
  if (pred.frames.rows() != ref.frames.rows() || pred.frames.cols() != ref.frames.cols())
    throw std::invalid_argument("stft_losses: shape mismatch");

  const ComplexSpectrogram reproj = stft(istft(pred), pred.config);
  auto mean_l1 = [](const CMat& a, const CMat& b) {
    const CMat d = a - b;
    return (d.real().cwiseAbs().sum() + d.imag().cwiseAbs().sum()) /
           static_cast<double>(2 * d.size());
  };
  StftLossTerms out;
  out.consistency = mean_l1(pred.frames, reproj.frames);
  out.l1 = mean_l1(pred.frames, ref.frames);
  return out;
}

double mel_l1(const Waveform& pred, const Waveform& ref, const MelFilterbank& fb) {
  const SpectralConfig& cfg = fb.spectral_config;
  const Mat lm_pred = log_compress(apply_mel(polar_split(stft(pred, cfg)).first, fb)).frames;
  const Mat lm_ref = log_compress(apply_mel(polar_split(stft(ref, cfg)).first, fb)).frames;
  const Eigen::Index T = std::min(lm_pred.rows(), lm_ref.rows());
  return (lm_pred.topRows(T) - lm_ref.topRows(T)).cwiseAbs().mean();
}

LossBreakdown total_generator_loss(double amplitude, const PhaseLossTerms& phase,
                                   const StftLossTerms& stft_terms, double mel,
                                   const LossWeights& w) {
  LossBreakdown b;
  b.amplitude = amplitude;
  b.inst_phase = phase.inst;
  b.group_delay = phase.gd;
  b.phase_time_diff = phase.ptd;
  b.stft_consistency = stft_terms.consistency;
  b.stft_l1 = stft_terms.l1;
  b.mel_l1 = mel;
  // feature-matching and adversarial terms of the lambda_w group are 0 here
  b.total = w.lambda_a * amplitude + w.lambda_p * (phase.inst + phase.gd + phase.ptd) +
            w.lambda_s * (stft_terms.consistency + stft_terms.l1) + w.lambda_w * (mel + 0.0 + 0.0);
  return b;
}

LossBreakdown evaluate_losses(const Waveform& pred, const Waveform& ref,
                              const MelFilterbank& fb, const LossWeights& w) {
  const SpectralConfig& cfg = fb.spectral_config;
  ComplexSpectrogram sp = stft(pred, cfg);
  ComplexSpectrogram sr = stft(ref, cfg);
  const Eigen::Index T = std::min(sp.frames.rows(), sr.frames.rows());
  sp.frames.conservativeResize(T, Eigen::NoChange);
  sr.frames.conservativeResize(T, Eigen::NoChange);

  const auto [amp_p, phase_p] = polar_split(sp);
  const auto [amp_r, phase_r] = polar_split(sr);

  const double amp = amplitude_loss(log_compress(amp_p), log_compress(amp_r));
  const PhaseLossTerms ph = phase_losses(phase_p, phase_r);
  const StftLossTerms st = stft_losses(sp, sr);
  const double mel = mel_l1(pred, ref, fb);
  return total_generator_loss(amp, ph, st, mel, w);
}

}  // namespace freev
