#include "freev/phase.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "freev/dsp.hpp"

namespace freev {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

double parallel_phase(double r, double i) {
  if (r == 0.0 && i == 0.0) return 0.0;
  double phi = std::atan2(i, r);
  if (phi <= -kPi) phi = kPi;
  return phi;
}

PhaseSpectrogram parallel_phase(const PhaseComponents& pc, const SpectralConfig& cfg) {
  if (pc.r.rows() != pc.i.rows() || pc.r.cols() != pc.i.cols())
    throw std::invalid_argument("parallel_phase: R/I shape mismatch");
  if (!pc.r.allFinite() || !pc.i.allFinite())
    throw std::invalid_argument("parallel_phase: non-finite input");
  PhaseSpectrogram out;
  out.config = cfg;
  out.frames = pc.r.binaryExpr(pc.i, [](double r, double i) { return parallel_phase(r, i); });
  return out;
}

double anti_wrap(double x) {
  return std::abs(x - kTwoPi * std::round(x / kTwoPi));
}

Mat anti_wrap(const Mat& x) {
  return x.unaryExpr([](double v) { return anti_wrap(v); });
}

PhaseSpectrogram griffin_lim(const AmplitudeSpectrogram& a, int iters) {
  if (iters < 0) throw std::invalid_argument("griffin_lim: iters must be >= 0");
  if (a.domain != AmpDomain::Linear)
    throw std::invalid_argument("griffin_lim: amplitude must be in the linear domain");

  PhaseSpectrogram phase;
  phase.config = a.config;
  phase.frames = Mat::Zero(a.frames.rows(), a.frames.cols());
  for (int it = 0; it < iters; ++it) {
    const ComplexSpectrogram s = recombine(a, phase);
    const Waveform w = istft(s);
    const ComplexSpectrogram s2 = stft(w, a.config);
    phase = polar_split(s2).second;
  }
  return phase;
}

}  // namespace freev
