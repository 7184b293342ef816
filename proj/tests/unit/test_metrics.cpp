#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>
#include <thread>

#include "freev/fixtures.hpp"
#include "freev/metrics.hpp"
#include "freev/resample.hpp"

using namespace freev;

namespace {

Waveform noise_wave(double seconds, std::uint64_t seed) {
  FixtureSpec spec;
  spec.kind = FixtureKind::Noise;
  spec.duration = seconds;
  spec.seed = seed;
  return make_fixture(spec);
}

Waveform voice_wave(double seconds, double f0, std::uint64_t seed) {
  FixtureSpec spec;
  spec.kind = FixtureKind::HarmonicVoice;
  spec.duration = seconds;
  spec.f0 = f0;
  spec.seed = seed;
  return make_fixture(spec);
}

const MelFilterbank& default_fb() {
  static const MelFilterbank fb = build_filterbank(SpectralConfig{}, MelConfig{});
  return fb;
}

}  // namespace

TEST_CASE("mcd: zero at self, hand-checked constant, gain invariance") {
  const Waveform w = noise_wave(0.6, 1);
  CHECK(mcd(w, w, default_fb()) == doctest::Approx(0.0));

  // two frames of cepstra differing by a unit vector in one coefficient
  Mat c_ref = Mat::Zero(2, 14), c_deg = Mat::Zero(2, 14);
  c_deg(0, 5) = 1.0;
  c_deg(1, 2) = 1.0;
  CHECK(mcd_from_cepstra(c_ref, c_deg) == doctest::Approx(6.141851463713754).epsilon(1e-9));

  // pure gain shifts only c0 under the orthonormal DCT
  Waveform half = w;
  for (auto& v : half.samples) v *= 0.5;
  CHECK(mcd(w, half, default_fb()) < 1e-6);
}

TEST_CASE("dct_rows: constant rows load only coefficient 0") {
  Mat x = Mat::Constant(3, 16, 2.5);
  const Mat c = dct_rows(x, 5);
  CHECK(c(0, 0) == doctest::Approx(2.5 * std::sqrt(16.0)));
  for (int k = 1; k < 5; ++k) CHECK(std::abs(c(1, k)) < 1e-12);
}

TEST_CASE("las_rmse: zero at self, exact value for a pure gain") {
  SpectralConfig cfg;
  const Waveform w = noise_wave(0.5, 2);
  CHECK(las_rmse(w, w, cfg) == doctest::Approx(0.0));

  // gain of e shifts every unfloored log cell by 1
  Waveform scaled = w;
  for (auto& v : scaled.samples) v *= std::exp(1.0);
  CHECK(las_rmse(scaled, w, cfg) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("track_pitch: 220 Hz sine within 2 Hz, all voiced") {
  FixtureSpec spec;
  spec.kind = FixtureKind::Sine;
  spec.duration = 1.0;
  spec.f0 = 220.0;
  const PitchTrack t = track_pitch(make_fixture(spec));
  REQUIRE(!t.f0.empty());
  int voiced = 0;
  std::vector<double> f0s;
  for (std::size_t i = 0; i < t.f0.size(); ++i) {
    if (t.voiced[i]) {
      ++voiced;
      f0s.push_back(t.f0[i]);
    }
  }
  CHECK(voiced == static_cast<int>(t.f0.size()));
  std::sort(f0s.begin(), f0s.end());
  CHECK(std::abs(f0s[f0s.size() / 2] - 220.0) < 2.0);
}

TEST_CASE("track_pitch octave consistency: doubling the sine frequency doubles f0") {
  FixtureSpec spec;
  spec.kind = FixtureKind::Sine;
  spec.duration = 1.0;
  spec.f0 = 220.0;
  const PitchTrack a = track_pitch(make_fixture(spec));
  spec.f0 = 440.0;
  const PitchTrack b = track_pitch(make_fixture(spec));
  auto median_f0 = [](const PitchTrack& t) {
    std::vector<double> v;
    for (std::size_t i = 0; i < t.f0.size(); ++i)
      if (t.voiced[i]) v.push_back(t.f0[i]);
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  CHECK(median_f0(b) / median_f0(a) == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("track_pitch: white noise mostly unvoiced, silence fully unvoiced") {
  const PitchTrack noise = track_pitch(noise_wave(1.0, 3));
  int voiced = 0;
  for (bool v : noise.voiced) voiced += v ? 1 : 0;
  CHECK(static_cast<double>(voiced) / noise.voiced.size() < 0.2);

  FixtureSpec spec;
  spec.kind = FixtureKind::Silence;
  spec.duration = 1.0;
  const PitchTrack sil = track_pitch(make_fixture(spec));
  for (std::size_t i = 0; i < sil.f0.size(); ++i) {
    CHECK(!sil.voiced[i]);
    CHECK(sil.f0[i] == 0.0);
  }
}

TEST_CASE("track_pitch rejects too-short input; f0>0 iff voiced") {
  Waveform w = noise_wave(0.02, 4);
  CHECK_THROWS_AS(track_pitch(w), std::invalid_argument);
  const PitchTrack t = track_pitch(voice_wave(0.5, 180.0, 5));
  for (std::size_t i = 0; i < t.f0.size(); ++i) {
    CHECK((t.f0[i] > 0.0) == t.voiced[i]);
    CHECK(t.periodicity[i] >= 0.0);
    CHECK(t.periodicity[i] <= 1.0);
  }
}

TEST_CASE("f0_metrics: identical tracks, offset tracks, half-voiced F1") {
  PitchTrack ref;
  ref.hop = 256;
  const int T = 40;
  for (int i = 0; i < T; ++i) {
    ref.f0.push_back(200.0);
    ref.voiced.push_back(true);
    ref.periodicity.push_back(0.9);
  }
  const F0Metrics self = f0_metrics(ref, ref);
  CHECK(*self.f0_rmse == doctest::Approx(0.0));
  CHECK(self.vuv_f1 == doctest::Approx(1.0));
  CHECK(self.periodicity_err == doctest::Approx(0.0));

  PitchTrack off = ref;
  for (auto& f : off.f0) f += 10.0;
  CHECK(*f0_metrics(ref, off).f0_rmse == doctest::Approx(10.0));

  // deg voiced everywhere, ref voiced on half the frames -> F1 = 2/3
  PitchTrack half = ref;
  for (int i = 0; i < T / 2; ++i) {
    half.voiced[i] = false;
    half.f0[i] = 0.0;
  }
  const F0Metrics fm = f0_metrics(half, ref);
  CHECK(fm.vuv_f1 == doctest::Approx(2.0 / 3.0));

  // no commonly voiced frames: rmse absent, not zero
  PitchTrack unv = ref;
  for (int i = 0; i < T; ++i) {
    unv.voiced[i] = false;
    unv.f0[i] = 0.0;
  }
  CHECK(!f0_metrics(unv, ref).f0_rmse.has_value());
}

TEST_CASE("resample_sinc preserves a mid-band tone") {
  const double sr_in = 22050.0, sr_out = 10000.0, f = 440.0;
  std::vector<double> x(22050);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = std::sin(2.0 * M_PI * f * i / sr_in);
  const std::vector<double> y = resample_sinc(x, sr_in, sr_out);
  CHECK(y.size() == 10000);
  double err = 0.0;
  for (std::size_t i = 200; i + 200 < y.size(); ++i) {
    const double expect = std::sin(2.0 * M_PI * f * i / sr_out);
    err = std::max(err, std::abs(y[i] - expect));
  }
  CHECK(err < 0.01);
}

TEST_CASE("stoi: reflexive 1.0, noise near 0, graceful degradation with SNR") {
  const Waveform v = voice_wave(1.0, 190.0, 6);
  CHECK(stoi(v, v) == doctest::Approx(1.0).epsilon(1e-6));

  const Waveform n = noise_wave(1.0, 7);
  CHECK(stoi(v, n) < 0.3);

  // 20 dB SNR additive noise keeps STOI high
  Waveform noisy = v;
  double sig = 0.0;
  for (double s : v.samples) sig += s * s;
  const Waveform noise = noise_wave(1.0, 8);
  double nrg = 0.0;
  for (double s : noise.samples) nrg += s * s;
  const double gain = std::sqrt(sig / nrg) * std::pow(10.0, -20.0 / 20.0);
  for (std::size_t i = 0; i < noisy.samples.size(); ++i) noisy.samples[i] += gain * noise.samples[i];
  CHECK(stoi(v, noisy) > 0.9);

  // monotone (non-strict) under increasing noise
  Waveform noisier = v;
  for (std::size_t i = 0; i < noisier.samples.size(); ++i)
    noisier.samples[i] += 4.0 * gain * noise.samples[i];
  CHECK(stoi(v, noisier) <= stoi(v, noisy) + 1e-9);

  // range contract
  CHECK(stoi(v, noisy) <= 1.0);
  CHECK(stoi(v, n) >= 0.0);
}

TEST_CASE("stoi rejects too-short input") {
  const Waveform v = voice_wave(0.2, 200.0, 9);
  CHECK_THROWS_AS(stoi(v, v), std::invalid_argument);
}

TEST_CASE("rtf_measure: sleep stub and stability") {
  auto half_second_for_one_second = [] {
    std::this_thread::sleep_for(std::chrono::milliseconds(500));
  };
  const double rtf = rtf_measure(half_second_for_one_second, 1.0, 5, 1);
  CHECK(rtf > 0.45);
  CHECK(rtf < 0.62);

  const double rtf2 = rtf_measure(half_second_for_one_second, 1.0, 5, 1);
  CHECK(rtf2 / rtf > 0.8);
  CHECK(rtf2 / rtf < 1.25);

  CHECK_THROWS_AS(rtf_measure([] {}, 0.0, 5, 1), std::invalid_argument);
}

TEST_CASE("evaluate_metrics on a self pair is reflexive across the board") {
  const Waveform v = voice_wave(1.0, 210.0, 10);
  const MetricReport r = evaluate_metrics(v, v, default_fb());
  CHECK(r.mcd == doctest::Approx(0.0));
  CHECK(r.las_rmse == doctest::Approx(0.0));
  CHECK(r.vuv_f1 == doctest::Approx(1.0));
  CHECK(r.periodicity_err == doctest::Approx(0.0));
  CHECK(r.stoi == doctest::Approx(1.0).epsilon(1e-6));
  REQUIRE(r.f0_rmse.has_value());
  CHECK(*r.f0_rmse == doctest::Approx(0.0));
}
