#include "freev/dsp.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fft_backend.hpp"

namespace freev {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kOlaFloor = 1e-11;

// Reflect-pad (librosa convention: no repeated edge sample).
std::vector<double> reflect_pad(const std::vector<double>& x, int pad) {
  const int n = static_cast<int>(x.size());
  if (n < 2 && pad > 0) throw std::invalid_argument("stft: signal too short for reflect padding");
  std::vector<double> out(n + 2 * pad);
  for (int i = 0; i < n + 2 * pad; ++i) {
    int src = i - pad;
    // fold until inside [0, n-1]
    while (src < 0 || src >= n) {
      if (src < 0) src = -src;
      if (src >= n) src = 2 * (n - 1) - src;
    }
    out[i] = x[src];
  }
  return out;
}

}  // namespace

Vec make_window(const SpectralConfig& cfg) {
  cfg.validate();
  Vec w = Vec::Zero(cfg.n_fft);
  const int offset = (cfg.n_fft - cfg.win_length) / 2;
  for (int i = 0; i < cfg.win_length; ++i) {
    // periodic Hann: exact COLA for hop dividing win_length
    w[offset + i] = 0.5 - 0.5 * std::cos(2.0 * kPi * i / cfg.win_length);
  }
  return w;
}

double cola_squared_deviation(const SpectralConfig& cfg) {
  const Vec w = make_window(cfg);
  const int n_fft = cfg.n_fft;
  const int hop = cfg.hop;
  // accumulate w^2 shifted by hop over enough frames to cover an interior span
  const int frames = 2 * (n_fft / hop) + 4;
  const int total = n_fft + frames * hop;
  Vec acc = Vec::Zero(total);
  for (int t = 0; t < frames; ++t) acc.segment(t * hop, n_fft) += w.cwiseAbs2();
  // interior region where every overlapping frame contributes
  const int lo = n_fft;
  const int hi = total - 2 * n_fft;
  if (hi <= lo) throw std::invalid_argument("cola_squared_deviation: degenerate config");
  const auto interior = acc.segment(lo, hi - lo);
  const double mean = interior.mean();
  if (mean <= 0) return 1.0;
  return (interior.maxCoeff() - interior.minCoeff()) / mean;
}

ComplexSpectrogram stft(const Waveform& w, const SpectralConfig& cfg) {
  cfg.validate();
  if (w.samples.empty()) throw std::invalid_argument("stft: empty input");
  if (w.sample_rate != cfg.sample_rate)
    throw std::invalid_argument("stft: waveform sample rate does not match config");
  for (double v : w.samples)
    if (!std::isfinite(v)) throw std::invalid_argument("stft: non-finite sample");

  const int n = static_cast<int>(w.samples.size());
  const int n_fft = cfg.n_fft;
  const int hop = cfg.hop;

  std::vector<double> x;
  int T = 0;
  if (cfg.center) {
    x = reflect_pad(w.samples, n_fft / 2);
    T = 1 + n / hop;
  } else {
    if (n < n_fft) throw std::invalid_argument("stft: signal shorter than n_fft with center=false");
    x = w.samples;
    T = 1 + (n - n_fft) / hop;
  }

  const Vec win = make_window(cfg);
  detail::RealFft fft(n_fft);
  std::vector<double> frame(n_fft);
  std::vector<std::complex<double>> bins(fft.n_bins());

  ComplexSpectrogram out;
  out.config = cfg;
  out.frames.resize(T, cfg.n_freq());
  for (int t = 0; t < T; ++t) {
    const double* src = x.data() + static_cast<std::size_t>(t) * hop;
    for (int i = 0; i < n_fft; ++i) frame[i] = src[i] * win[i];
    fft.forward(frame.data(), bins.data());
    for (int k = 0; k < cfg.n_freq(); ++k) out.frames(t, k) = bins[k];
  }
  return out;
}

Waveform istft(const ComplexSpectrogram& s) {
  const SpectralConfig& cfg = s.config;
  cfg.validate();
  if (s.frames.cols() != cfg.n_freq())
    throw std::invalid_argument("istft: spectrogram width does not match config");
  if (cola_squared_deviation(cfg) > 1e-10)
    throw std::invalid_argument("istft: window/hop pair fails squared-window COLA");

  const int T = static_cast<int>(s.frames.rows());
  const int n_fft = cfg.n_fft;
  const int hop = cfg.hop;
  const Vec win = make_window(cfg);

  const int total = (T - 1) * hop + n_fft;
  Vec acc = Vec::Zero(total);
  Vec den = Vec::Zero(total);

  detail::RealFft fft(n_fft);
  std::vector<std::complex<double>> bins(fft.n_bins());
  std::vector<double> frame(n_fft);
  for (int t = 0; t < T; ++t) {
    for (int k = 0; k < cfg.n_freq(); ++k) bins[k] = s.frames(t, k);
    fft.inverse(bins.data(), frame.data());
    for (int i = 0; i < n_fft; ++i) {
      acc[t * hop + i] += frame[i] * win[i];
      den[t * hop + i] += win[i] * win[i];
    }
  }
  for (int i = 0; i < total; ++i) acc[i] /= std::max(den[i], kOlaFloor);

  Waveform out;
  out.sample_rate = cfg.sample_rate;
  if (cfg.center) {
    const int n_out = (T - 1) * hop;
    const int lo = n_fft / 2;
    out.samples.assign(acc.data() + lo, acc.data() + lo + n_out);
  } else {
    out.samples.assign(acc.data(), acc.data() + total);
  }
  return out;
}

std::pair<AmplitudeSpectrogram, PhaseSpectrogram> polar_split(const ComplexSpectrogram& s) {
  AmplitudeSpectrogram a;
  a.domain = AmpDomain::Linear;
  a.config = s.config;
  PhaseSpectrogram p;
  p.config = s.config;
  const auto rows = s.frames.rows(), cols = s.frames.cols();
  a.frames.resize(rows, cols);
  p.frames.resize(rows, cols);
  for (Eigen::Index t = 0; t < rows; ++t) {
    for (Eigen::Index k = 0; k < cols; ++k) {
      const std::complex<double> v = s.frames(t, k);
      const double mag = std::abs(v);
      a.frames(t, k) = mag;
      if (mag == 0.0) {
        p.frames(t, k) = 0.0;  // angle of zero defined as 0
      } else {
        double phi = std::atan2(v.imag(), v.real());
        if (phi <= -kPi) phi = kPi;  // keep range (-pi, pi]
        p.frames(t, k) = phi;
      }
    }
  }
  return {std::move(a), std::move(p)};
}

ComplexSpectrogram recombine(const AmplitudeSpectrogram& a, const PhaseSpectrogram& p) {
  if (a.domain != AmpDomain::Linear)
    throw std::invalid_argument("recombine: amplitude must be in the linear domain");
  if (a.frames.rows() != p.frames.rows() || a.frames.cols() != p.frames.cols())
    throw std::invalid_argument("recombine: amplitude/phase shape mismatch");
  ComplexSpectrogram s;
  s.config = a.config;
  s.frames = a.frames.binaryExpr(p.frames, [](double mag, double phi) {
    return std::complex<double>(mag * std::cos(phi), mag * std::sin(phi));
  });
  return s;
}

}  // namespace freev
