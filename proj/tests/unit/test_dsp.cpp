#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "freev/dsp.hpp"
#include "freev/fixtures.hpp"

using namespace freev;

namespace {

constexpr double kPi = std::numbers::pi;

Waveform random_wave(int n, std::uint64_t seed, double sr = 22050.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-0.9, 0.9);
  Waveform w;
  w.sample_rate = sr;
  w.samples.resize(n);
  for (auto& v : w.samples) v = dist(rng);
  return w;
}

// quadratic-time DFT of one windowed frame
std::vector<std::complex<double>> dft_oracle(const std::vector<double>& frame, int n_bins) {
  const int n = static_cast<int>(frame.size());
  std::vector<std::complex<double>> out(n_bins);
  for (int k = 0; k < n_bins; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (int i = 0; i < n; ++i) acc += frame[i] * std::polar(1.0, -2.0 * kPi * k * i / n);
    out[k] = acc;
  }
  return out;
}

double rel_rms_error(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += a[i] * a[i];
  }
  return std::sqrt(num / std::max(den, 1e-300));
}

}  // namespace

TEST_CASE("config validation") {
  SpectralConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.n_freq() == 513);
  cfg.hop = 2048;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SpectralConfig{};
  cfg.win_length = 2048;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("squared Hann window satisfies COLA at the default geometry") {
  SpectralConfig cfg;
  CHECK(cola_squared_deviation(cfg) < 1e-10);
  // a hop that does not divide the window period fails
  SpectralConfig bad = cfg;
  bad.hop = 300;
  CHECK(cola_squared_deviation(bad) > 1e-10);
}

TEST_CASE("stft frame count and determinism") {
  SpectralConfig cfg;
  const Waveform w = random_wave(22050, 1);
  const auto s1 = stft(w, cfg);
  CHECK(s1.frames.rows() == 1 + 22050 / 256);
  CHECK(s1.frames.cols() == 513);
  const auto s2 = stft(w, cfg);
  CHECK((s1.frames - s2.frames).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("stft rejects bad input") {
  SpectralConfig cfg;
  Waveform empty;
  empty.sample_rate = cfg.sample_rate;
  CHECK_THROWS_AS(stft(empty, cfg), std::invalid_argument);
  Waveform wrong_rate = random_wave(4096, 2, 16000.0);
  CHECK_THROWS_AS(stft(wrong_rate, cfg), std::invalid_argument);
}

TEST_CASE("unit impulse: frame 0 magnitude equals the window sample, flat across bins") {
  SpectralConfig cfg;
  cfg.center = false;
  const Vec win = make_window(cfg);
  for (int pos : {0, 512}) {
    Waveform w;
    w.sample_rate = cfg.sample_rate;
    w.samples.assign(2048, 0.0);
    w.samples[pos] = 1.0;
    const auto s = stft(w, cfg);
    for (int k = 0; k < cfg.n_freq(); k += 37)
      CHECK(std::abs(s.frames(0, k)) == doctest::Approx(win[pos]).epsilon(1e-9));
  }
}

TEST_CASE("bin-centered sinusoid peaks at its bin in interior frames") {
  SpectralConfig cfg;
  const int k = 40;  // 40 * 22050/1024 Hz
  const double f = k * cfg.sample_rate / cfg.n_fft;
  Waveform w;
  w.sample_rate = cfg.sample_rate;
  w.samples.resize(8192);
  for (std::size_t i = 0; i < w.samples.size(); ++i)
    w.samples[i] = std::sin(2.0 * kPi * f * i / cfg.sample_rate);
  const auto s = stft(w, cfg);
  for (Eigen::Index t = 2; t < s.frames.rows() - 2; ++t) {
    Eigen::Index argmax = 0;
    s.frames.row(t).cwiseAbs().maxCoeff(&argmax);
    CHECK(argmax == k);
  }
}

TEST_CASE("zero signal gives an all-zero spectrogram") {
  SpectralConfig cfg;
  Waveform w;
  w.sample_rate = cfg.sample_rate;
  w.samples.assign(4096, 0.0);
  const auto s = stft(w, cfg);
  CHECK(s.frames.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("stft matches the quadratic-time DFT oracle within 1e-9") {
  SpectralConfig cfg;
  cfg.center = false;
  const Waveform w = random_wave(4096, 3);
  const auto s = stft(w, cfg);
  const Vec win = make_window(cfg);
  for (Eigen::Index t = 0; t < s.frames.rows(); t += 3) {
    std::vector<double> frame(cfg.n_fft);
    for (int i = 0; i < cfg.n_fft; ++i) frame[i] = w.samples[t * cfg.hop + i] * win[i];
    const auto oracle = dft_oracle(frame, cfg.n_freq());
    double max_err = 0.0;
    for (int k = 0; k < cfg.n_freq(); ++k)
      max_err = std::max(max_err, std::abs(s.frames(t, k) - oracle[k]));
    CHECK(max_err < 1e-9);
  }
}

TEST_CASE("Parseval consistency per frame (center=false)") {
  SpectralConfig cfg;
  cfg.center = false;
  const Waveform w = random_wave(4096, 4);
  const auto s = stft(w, cfg);
  const Vec win = make_window(cfg);
  for (Eigen::Index t = 0; t < s.frames.rows(); ++t) {
    double time_energy = 0.0;
    for (int i = 0; i < cfg.n_fft; ++i) {
      const double v = w.samples[t * cfg.hop + i] * win[i];
      time_energy += v * v;
    }
    double spec_energy = std::norm(s.frames(t, 0)) + std::norm(s.frames(t, cfg.n_freq() - 1));
    for (int k = 1; k < cfg.n_freq() - 1; ++k) spec_energy += 2.0 * std::norm(s.frames(t, k));
    spec_energy /= cfg.n_fft;
    CHECK(std::abs(spec_energy - time_energy) / time_energy < 1e-6);
  }
}

TEST_CASE("istft round trip: random signal of length 8192") {
  SpectralConfig cfg;
  const Waveform w = random_wave(8192, 5);
  const Waveform rec = istft(stft(w, cfg));
  CHECK(rec.samples.size() == 8192);
  CHECK(rel_rms_error(w.samples, rec.samples) < 1e-6);
}

TEST_CASE("istft round trip on every fixture kind") {
  SpectralConfig cfg;
  for (FixtureKind kind : {FixtureKind::Sine, FixtureKind::HarmonicVoice, FixtureKind::Noise,
                           FixtureKind::Chirp}) {
    FixtureSpec spec;
    spec.kind = kind;
    spec.duration = 0.743;  // deliberately not hop-aligned
    spec.f0 = 210.0;
    spec.seed = 9;
    const Waveform w = make_fixture(spec);
    const Waveform rec = istft(stft(w, cfg));
    std::vector<double> head(w.samples.begin(), w.samples.begin() + rec.samples.size());
    CHECK(rel_rms_error(head, rec.samples) < 1e-6);
  }
}

TEST_CASE("istft of an all-zero spectrogram is silence") {
  SpectralConfig cfg;
  ComplexSpectrogram s;
  s.config = cfg;
  s.frames = CMat::Zero(20, cfg.n_freq());
  const Waveform w = istft(s);
  CHECK(w.samples.size() == 19 * 256);
  for (double v : w.samples) CHECK(v == 0.0);
}

TEST_CASE("istft rejects a non-COLA config") {
  SpectralConfig cfg;
  cfg.hop = 300;  // violates squared-window COLA for Hann-1024
  ComplexSpectrogram s;
  s.config = cfg;
  s.frames = CMat::Zero(4, cfg.n_freq());
  CHECK_THROWS_AS(istft(s), std::invalid_argument);
}

TEST_CASE("polar_split handles zeros, negative axis and recombines exactly") {
  SpectralConfig cfg;
  ComplexSpectrogram s;
  s.config = cfg;
  s.frames = CMat::Zero(1, cfg.n_freq());
  s.frames(0, 0) = std::complex<double>(0.0, 0.0);
  s.frames(0, 1) = std::complex<double>(-1.0, 0.0);
  s.frames(0, 2) = std::complex<double>(-1.0, -0.0);
  s.frames(0, 3) = std::complex<double>(0.0, 2.0);
  const auto [a, p] = polar_split(s);
  CHECK(a.frames(0, 0) == 0.0);
  CHECK(p.frames(0, 0) == 0.0);
  CHECK(a.frames(0, 1) == doctest::Approx(1.0));
  CHECK(p.frames(0, 1) == doctest::Approx(kPi));
  CHECK(p.frames(0, 2) == doctest::Approx(kPi));  // -pi maps into (-pi, pi]
  CHECK(p.frames(0, 3) == doctest::Approx(kPi / 2));
}

TEST_CASE("polar identity on a random spectrogram") {
  SpectralConfig cfg;
  const auto s = stft(random_wave(4096, 6), cfg);
  const auto [a, p] = polar_split(s);
  const auto back = recombine(a, p);
  CHECK((back.frames - s.frames).cwiseAbs().maxCoeff() < 1e-12 * a.frames.maxCoeff());
  // phase range contract
  CHECK(p.frames.maxCoeff() <= kPi);
  CHECK(p.frames.minCoeff() > -kPi);
  CHECK(a.frames.minCoeff() >= 0.0);
}

TEST_CASE("recombine basics and domain check") {
  SpectralConfig cfg;
  AmplitudeSpectrogram a;
  a.config = cfg;
  a.domain = AmpDomain::Linear;
  a.frames = Mat::Ones(2, cfg.n_freq());
  PhaseSpectrogram p;
  p.config = cfg;
  p.frames = Mat::Constant(2, cfg.n_freq(), kPi / 2);
  const auto s = recombine(a, p);
  CHECK(s.frames(1, 100).real() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(s.frames(1, 100).imag() == doctest::Approx(1.0));

  a.frames.setZero();
  const auto z = recombine(a, p);
  CHECK(z.frames.cwiseAbs().maxCoeff() == 0.0);

  a.domain = AmpDomain::Log;
  CHECK_THROWS_AS(recombine(a, p), std::invalid_argument);
}
