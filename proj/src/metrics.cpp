#include "freev/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "freev/dsp.hpp"
#include "freev/resample.hpp"

namespace freev {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMcdScale = 14.142135623730951 / 2.302585092994046;  // 10*sqrt(2)/ln 10

Mat logmel_of(const Waveform& w, const MelFilterbank& fb) {
  const auto amp = polar_split(stft(w, fb.spectral_config)).first;
  return log_compress(apply_mel(amp, fb)).frames;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

Mat dct_rows(const Mat& x, int n_coeff) {
  const int n = static_cast<int>(x.cols());
  Mat basis(n, n_coeff);
  const double s0 = std::sqrt(1.0 / n);
  const double s = std::sqrt(2.0 / n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n_coeff; ++k)
      basis(i, k) = (k == 0 ? s0 : s) * std::cos(kPi * (i + 0.5) * k / n);
  return x * basis;
}

double mcd_from_cepstra(const Mat& c_ref, const Mat& c_deg) {
  if (c_ref.rows() != c_deg.rows() || c_ref.cols() != c_deg.cols())
    throw std::invalid_argument("mcd_from_cepstra: shape mismatch");
  if (c_ref.cols() < 14)
    throw std::invalid_argument("mcd_from_cepstra: need at least 14 cepstral columns");
  if (c_ref.rows() == 0) throw std::invalid_argument("mcd_from_cepstra: empty input");
  double acc = 0.0;
  for (Eigen::Index t = 0; t < c_ref.rows(); ++t)
    acc += (c_ref.row(t).segment(1, 13) - c_deg.row(t).segment(1, 13)).norm();
  return kMcdScale * acc / static_cast<double>(c_ref.rows());
}

double mcd(const Waveform& ref, const Waveform& deg, const MelFilterbank& fb) {
  if (ref.sample_rate != deg.sample_rate)
    throw std::invalid_argument("mcd: sample rate mismatch");
  Mat lm_ref = logmel_of(ref, fb);
  Mat lm_deg = logmel_of(deg, fb);
  const Eigen::Index T = std::min(lm_ref.rows(), lm_deg.rows());
  if (T < 1) throw std::invalid_argument("mcd: empty overlap");
  return mcd_from_cepstra(dct_rows(lm_ref.topRows(T), 14), dct_rows(lm_deg.topRows(T), 14));
}

double las_rmse(const Waveform& ref, const Waveform& deg, const SpectralConfig& cfg) {
  if (ref.sample_rate != deg.sample_rate)
    throw std::invalid_argument("las_rmse: sample rate mismatch");
  Mat la = log_compress(polar_split(stft(ref, cfg)).first.frames);
  Mat lb = log_compress(polar_split(stft(deg, cfg)).first.frames);
  const Eigen::Index T = std::min(la.rows(), lb.rows());
  return log_spectral_rmse(la.topRows(T), lb.topRows(T));
}

PitchTrack track_pitch(const Waveform& w, const YinOptions& opts) {
  if (w.sample_rate <= 0) throw std::invalid_argument("track_pitch: bad sample rate");
  const double fs = w.sample_rate;
  const int tau_max = static_cast<int>(fs / opts.f_min);
  const int tau_min = std::max(2, static_cast<int>(fs / opts.f_max));
  const int frame = opts.frame_length;
  const int win = frame / 2;  // integration window
  if (win + tau_max > frame)
    throw std::invalid_argument("track_pitch: frame too short for f_min");
  const int n = static_cast<int>(w.samples.size());
  if (n < 4 * tau_max)
    throw std::invalid_argument("track_pitch: input shorter than 4 pitch periods at f_min");

  const int T = 1 + (n - frame) / opts.hop;
  PitchTrack track;
  track.hop = opts.hop;
  track.f0.resize(T);
  track.voiced.resize(T);
  track.periodicity.resize(T);

  std::vector<double> d(tau_max + 1), dnorm(tau_max + 1);
  for (int t = 0; t < T; ++t) {
    const double* x = w.samples.data() + static_cast<std::size_t>(t) * opts.hop;
    d[0] = 0.0;
    for (int tau = 1; tau <= tau_max; ++tau) {
      double acc = 0.0;
      for (int j = 0; j < win; ++j) {
        const double diff = x[j] - x[j + tau];
        acc += diff * diff;
      }
      d[tau] = acc;
    }
    // cumulative-mean normalization
    dnorm[0] = 1.0;
    double running = 0.0;
    for (int tau = 1; tau <= tau_max; ++tau) {
      running += d[tau];
      dnorm[tau] = running > 0.0 ? d[tau] * tau / running : 1.0;
    }

    // first threshold crossing, descended to its local minimum
    int tau_star = -1;
    for (int tau = tau_min; tau <= tau_max; ++tau) {
      if (dnorm[tau] < opts.threshold) {
        while (tau + 1 <= tau_max && dnorm[tau + 1] < dnorm[tau]) ++tau;
        tau_star = tau;
        break;
      }
    }
    bool voiced = tau_star > 0;
    if (!voiced) {
      // fall back to the global minimum for the periodicity value
      tau_star = tau_min;
      for (int tau = tau_min; tau <= tau_max; ++tau)
        if (dnorm[tau] < dnorm[tau_star]) tau_star = tau;
    }

    // parabolic interpolation around tau_star
    double tau_refined = tau_star;
    if (tau_star > tau_min && tau_star < tau_max) {
      const double a = dnorm[tau_star - 1], b = dnorm[tau_star], c = dnorm[tau_star + 1];
      const double denom = a - 2.0 * b + c;
      if (std::abs(denom) > 1e-12) tau_refined = tau_star + 0.5 * (a - c) / denom;
    }

    track.voiced[t] = voiced;
    track.f0[t] = voiced ? fs / tau_refined : 0.0;
    track.periodicity[t] = std::clamp(1.0 - dnorm[tau_star], 0.0, 1.0);
  }
  return track;
}

F0Metrics f0_metrics(const PitchTrack& ref, const PitchTrack& deg) {
  if (ref.f0.size() != deg.f0.size())
    throw std::invalid_argument("f0_metrics: frame count mismatch");
  const std::size_t T = ref.f0.size();
  if (T == 0) throw std::invalid_argument("f0_metrics: empty tracks");

  double sq = 0.0;
  int both = 0, tp = 0, fp = 0, fn = 0;
  double per_sq = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    const bool rv = ref.voiced[t], dv = deg.voiced[t];
    if (rv && dv) {
      const double d = ref.f0[t] - deg.f0[t];
      sq += d * d;
      ++both;
      ++tp;
    } else if (!rv && dv) {
      ++fp;
    } else if (rv && !dv) {
      ++fn;
    }
    const double pd = ref.periodicity[t] - deg.periodicity[t];
    per_sq += pd * pd;
  }

  F0Metrics out;
  if (both > 0) out.f0_rmse = std::sqrt(sq / both);
  const double denom = 2.0 * tp + fp + fn;
  out.vuv_f1 = denom > 0 ? 2.0 * tp / denom : 1.0;  // no voiced frames anywhere: perfect
  out.periodicity_err = std::sqrt(per_sq / static_cast<double>(T));
  return out;
}

namespace stoi_detail {

constexpr int kFrame = 256;
constexpr int kHop = 128;
constexpr int kFft = 512;
constexpr int kBins = kFft / 2 + 1;
constexpr int kBands = 15;
constexpr int kSegment = 30;          // frames per analysis segment (384 ms)
constexpr double kDynRange = 40.0;    // silent-frame removal, dB
constexpr double kBetaClip = -15.0;   // SDR clip, dB

std::vector<std::vector<double>> frame_signal(const std::vector<double>& x) {
  std::vector<std::vector<double>> frames;
  if (x.size() < kFrame) return frames;
  for (std::size_t start = 0; start + kFrame <= x.size(); start += kHop) {
    frames.emplace_back(x.begin() + start, x.begin() + start + kFrame);
  }
  return frames;
}

}  // namespace stoi_detail

double stoi(const Waveform& ref, const Waveform& deg) {
  using namespace stoi_detail;
  if (ref.sample_rate != deg.sample_rate)
    throw std::invalid_argument("stoi: sample rate mismatch");

  const std::size_t n = std::min(ref.samples.size(), deg.samples.size());
  std::vector<double> x(ref.samples.begin(), ref.samples.begin() + n);
  std::vector<double> y(deg.samples.begin(), deg.samples.begin() + n);
  x = resample_sinc(x, ref.sample_rate, 10000.0);
  y = resample_sinc(y, deg.sample_rate, 10000.0);

  Vec window(kFrame);
  for (int i = 0; i < kFrame; ++i)
    window[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * (i + 1) / (kFrame + 1));

  // silent-frame removal driven by the reference energy
  auto xf = frame_signal(x);
  auto yf = frame_signal(y);
  const std::size_t n_frames = std::min(xf.size(), yf.size());
  std::vector<double> energy_db(n_frames);
  double max_db = -1e300;
  for (std::size_t t = 0; t < n_frames; ++t) {
    double e = 0.0;
    for (int i = 0; i < kFrame; ++i) e += xf[t][i] * window[i] * xf[t][i] * window[i];
    energy_db[t] = 10.0 * std::log10(e + 1e-300);
    max_db = std::max(max_db, energy_db[t]);
  }
  // overlap-add the retained windowed frames back-to-back at 50% overlap
  std::size_t kept = 0;
  std::vector<double> xa, ya;
  for (std::size_t t = 0; t < n_frames; ++t) {
    if (energy_db[t] < max_db - kDynRange) continue;
    const std::size_t pos = kept * kHop;
    if (xa.size() < pos + kFrame) {
      xa.resize(pos + kFrame, 0.0);
      ya.resize(pos + kFrame, 0.0);
    }
    for (int i = 0; i < kFrame; ++i) {
      xa[pos + i] += xf[t][i] * window[i];
      ya[pos + i] += yf[t][i] * window[i];
    }
    ++kept;
  }

  auto framesx = frame_signal(xa);
  auto framesy = frame_signal(ya);
  const std::size_t M = std::min(framesx.size(), framesy.size());
  if (M < kSegment)
    throw std::invalid_argument("stoi: need >= 384 ms of active signal");

  // one-third-octave band magnitudes via a zero-padded 512-point DFT
  Mat bandx(M, kBands), bandy(M, kBands);
  std::vector<std::pair<int, int>> edges(kBands);
  for (int j = 0; j < kBands; ++j) {
    const double cf = 150.0 * std::pow(2.0, j / 3.0);
    const double fl = cf * std::pow(2.0, -1.0 / 6.0);
    const double fr = cf * std::pow(2.0, 1.0 / 6.0);
    auto nearest_bin = [&](double f) {
      int best = 0;
      double bd = 1e300;
      for (int k = 0; k < kBins; ++k) {
        const double bf = k * 10000.0 / kFft;
        const double d = (bf - f) * (bf - f);
        if (d < bd) {
          bd = d;
          best = k;
        }
      }
      return best;
    };
    edges[j] = {nearest_bin(fl), nearest_bin(fr)};
  }

  static const Eigen::MatrixXcd kDftBasis = [] {
    Eigen::MatrixXcd b(kBins, kFrame);
    for (int k = 0; k < kBins; ++k)
      for (int i = 0; i < kFrame; ++i)
        b(k, i) = std::polar(1.0, -2.0 * kPi * k * i / kFft);
    return b;
  }();

  Vec wframe(kFrame);
  auto band_mags = [&](const std::vector<double>& frame, Mat& out, std::size_t t) {
    for (int i = 0; i < kFrame; ++i) wframe[i] = frame[i] * window[i];
    const Eigen::VectorXcd spec = kDftBasis * wframe;
    for (int j = 0; j < kBands; ++j) {
      double e = 0.0;
      for (int k = edges[j].first; k < edges[j].second; ++k) e += std::norm(spec[k]);
      out(t, j) = std::sqrt(e);
    }
  };
  for (std::size_t t = 0; t < M; ++t) {
    band_mags(framesx[t], bandx, t);
    band_mags(framesy[t], bandy, t);
  }

  const double clip_gain = std::pow(10.0, -kBetaClip / 20.0);
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t m = kSegment; m <= M; ++m) {
    for (int j = 0; j < kBands; ++j) {
      Vec xs = bandx.block(m - kSegment, j, kSegment, 1);
      Vec ys = bandy.block(m - kSegment, j, kSegment, 1);
      const double nx = xs.norm(), ny = ys.norm();
      if (ny > 0) ys *= nx / ny;
      for (int i = 0; i < kSegment; ++i) ys[i] = std::min(ys[i], xs[i] * (1.0 + clip_gain));
      const Vec xc = xs.array() - xs.mean();
      const Vec yc = ys.array() - ys.mean();
      const double den = xc.norm() * yc.norm();
      acc += den > 0 ? xc.dot(yc) / den : (xc.norm() == yc.norm() ? 1.0 : 0.0);
      ++count;
    }
  }
  return acc / static_cast<double>(count);
}

double rtf_measure(const std::function<void()>& run, double synthesized_seconds, int runs,
                   int warmup) {
  if (synthesized_seconds <= 0)
    throw std::invalid_argument("rtf_measure: synthesized duration must be > 0");
  if (runs < 1) throw std::invalid_argument("rtf_measure: runs must be >= 1");
  using Clock = std::chrono::steady_clock;
  for (int i = 0; i < warmup; ++i) run();
  std::vector<double> times;
  times.reserve(runs);
  for (int i = 0; i < runs; ++i) {
    const auto t0 = Clock::now();
    run();
    const auto t1 = Clock::now();
    times.push_back(std::chrono::duration<double>(t1 - t0).count());
  }
  return median_of(std::move(times)) / synthesized_seconds;
}

MetricReport evaluate_metrics(const Waveform& ref, const Waveform& deg,
                              const MelFilterbank& fb) {
  MetricReport r;
  r.mcd = mcd(ref, deg, fb);
  r.las_rmse = las_rmse(ref, deg, fb.spectral_config);
  const PitchTrack pt_ref = track_pitch(ref);
  const PitchTrack pt_deg = track_pitch(deg);
  const std::size_t T = std::min(pt_ref.f0.size(), pt_deg.f0.size());
  PitchTrack a = pt_ref, b = pt_deg;
  a.f0.resize(T); a.voiced.resize(T); a.periodicity.resize(T);
  b.f0.resize(T); b.voiced.resize(T); b.periodicity.resize(T);
  const F0Metrics fm = f0_metrics(a, b);
  r.f0_rmse = fm.f0_rmse;
  r.vuv_f1 = fm.vuv_f1;
  r.periodicity_err = fm.periodicity_err;
  r.stoi = stoi(ref, deg);
  return r;
}

}  // namespace freev
