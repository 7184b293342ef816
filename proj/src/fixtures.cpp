#include "freev/fixtures.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace freev {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Standard-normal via Box-Muller on mt19937_64 (well-defined sequence per
// platform libm).
class Gaussian {
 public:
  explicit Gaussian(std::uint64_t seed) : rng_(seed) {}

  double operator()() {
    if (have_) {
      have_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    have_ = true;
    return r * std::cos(kTwoPi * u2);
  }

 private:
  double uniform() { return (rng_() >> 11) * 0x1.0p-53; }
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_ = false;
};

// Two-pole resonator, unit peak-ish gain at fc.
struct Resonator {
  double b0, a1, a2;
  double z1 = 0.0, z2 = 0.0;

  Resonator(double fc, double bw, double fs) {
    const double r = std::exp(-kPi * bw / fs);
    a1 = -2.0 * r * std::cos(kTwoPi * fc / fs);
    a2 = r * r;
    b0 = (1.0 - r * r) / 2.0;
  }

  double step(double x) {
    const double y = b0 * x - a1 * z1 - a2 * z2;
    z2 = z1;
    z1 = y;
    return y;
  }
};

struct Formant {
  double fc;
  double bw;
};

constexpr Formant kFormants[] = {{500.0, 80.0}, {1500.0, 120.0}, {2500.0, 200.0}};

std::vector<double> harmonic_voice(double duration, double f0, std::uint64_t seed, double fs) {
  const int n = static_cast<int>(duration * fs);
  Gaussian gauss(seed);

  // slow f0 wander (jitter), piecewise-linear every 128 samples
  const int seg = 128;
  std::vector<double> knots(static_cast<std::size_t>(n / seg) + 2);
  for (auto& k : knots) k = gauss();

  std::vector<double> x(n, 0.0);
  const int n_harm = std::max(1, static_cast<int>(2600.0 / f0));
  std::vector<double> harm_amp(n_harm + 1, 0.0);
  for (int h = 1; h <= n_harm; ++h) {
    const double fh = h * f0;
    double a = 0.0;
    for (const auto& fm : kFormants) a += fm.bw / (fm.bw + std::abs(fh - fm.fc));
    harm_amp[h] = a / (1.0 + 0.25 * h);
  }

  double phase = 0.0;
  double peak = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = i / fs;
    const double wobble =
        1.0 + 0.03 * std::sin(kTwoPi * 4.5 * t) + 0.08 * std::sin(kTwoPi * 0.7 * t);
    const double kpos = static_cast<double>(i) / seg;
    const int k0 = static_cast<int>(kpos);
    const double jit = knots[k0] + (kpos - k0) * (knots[k0 + 1] - knots[k0]);
    const double f_inst = f0 * wobble * (1.0 + 0.004 * jit);
    phase += kTwoPi * f_inst / fs;
    double v = 0.0;
    for (int h = 1; h <= n_harm; ++h) v += harm_amp[h] * std::sin(h * phase);
    x[i] = v;
    peak = std::max(peak, std::abs(v));
  }
  for (auto& v : x) v /= peak;

  // breath noise through the same formants plus a broadband bed, -20 dB
  // relative to the voiced part RMS
  std::vector<Resonator> res;
  for (const auto& fm : kFormants) res.emplace_back(fm.fc, 3.0 * fm.bw, fs);
  std::vector<double> breath(n);
  double br_energy = 0.0, x_energy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = gauss();
    double b = 0.25 * e;
    for (auto& r : res) b += r.step(e);
    breath[i] = b;
    br_energy += b * b;
    x_energy += x[i] * x[i];
  }
  const double breath_gain =
      std::pow(10.0, -20.0 / 20.0) * std::sqrt(x_energy / std::max(br_energy, 1e-30));
  for (int i = 0; i < n; ++i) x[i] += breath_gain * breath[i];

  // syllabic amplitude modulation and room noise floor
  peak = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = i / fs;
    const double env = 0.1 + 0.9 * (0.5 - 0.5 * std::cos(kTwoPi * 3.1 * t));
    x[i] *= env;
    peak = std::max(peak, std::abs(x[i]));
  }
  const double room = std::pow(10.0, -68.0 / 20.0);
  for (int i = 0; i < n; ++i) x[i] = 0.5 * x[i] / peak + room * gauss();
  return x;
}

}  // namespace

Waveform make_fixture(const FixtureSpec& spec) {
  if (spec.duration <= 0) throw std::invalid_argument("make_fixture: duration must be > 0");
  if (spec.sample_rate <= 0) throw std::invalid_argument("make_fixture: sample_rate must be > 0");
  const int n = static_cast<int>(spec.duration * spec.sample_rate);
  const double fs = spec.sample_rate;

  Waveform out;
  out.sample_rate = fs;
  switch (spec.kind) {
    case FixtureKind::Silence:
      out.samples.assign(n, 0.0);
      break;
    case FixtureKind::Sine: {
      out.samples.resize(n);
      for (int i = 0; i < n; ++i) out.samples[i] = 0.5 * std::sin(kTwoPi * spec.f0 * i / fs);
      break;
    }
    case FixtureKind::Noise: {
      Gaussian gauss(spec.seed);
      out.samples.resize(n);
      for (int i = 0; i < n; ++i) out.samples[i] = 0.3 * gauss();
      break;
    }
    case FixtureKind::Chirp: {
      // linear sweep 100 Hz .. 4 kHz
      out.samples.resize(n);
      const double f_lo = 100.0, f_hi = 4000.0;
      for (int i = 0; i < n; ++i) {
        const double t = i / fs;
        const double f = f_lo + (f_hi - f_lo) * t / spec.duration;
        out.samples[i] = 0.5 * std::sin(kTwoPi * (f_lo * t + 0.5 * (f - f_lo) * t));
      }
      break;
    }
    case FixtureKind::HarmonicVoice:
      out.samples = harmonic_voice(spec.duration, spec.f0, spec.seed, fs);
      break;
  }
  return out;
}

FixtureKind fixture_kind_from_string(const std::string& name) {
  if (name == "sine") return FixtureKind::Sine;
  if (name == "harmonic_voice") return FixtureKind::HarmonicVoice;
  if (name == "noise") return FixtureKind::Noise;
  if (name == "chirp") return FixtureKind::Chirp;
  if (name == "silence") return FixtureKind::Silence;
  throw std::invalid_argument("unknown fixture kind: " + name);
}

std::string to_string(FixtureKind kind) {
  switch (kind) {
    case FixtureKind::Sine: return "sine";
    case FixtureKind::HarmonicVoice: return "harmonic_voice";
    case FixtureKind::Noise: return "noise";
    case FixtureKind::Chirp: return "chirp";
    case FixtureKind::Silence: return "silence";
  }
  return "?";
}

std::vector<Waveform> make_bench_clips(int count, double duration, double sample_rate,
                                       std::uint64_t seed0) {
  if (count < 1) throw std::invalid_argument("make_bench_clips: count must be >= 1");
  std::vector<Waveform> clips;
  clips.reserve(count);
  for (int i = 0; i < count; ++i) {
    FixtureSpec spec;
    spec.kind = FixtureKind::HarmonicVoice;
    spec.duration = duration;
    spec.sample_rate = sample_rate;
    spec.seed = seed0 + static_cast<std::uint64_t>(i);
    spec.f0 = 170.0 + 90.0 * (count > 1 ? static_cast<double>(i) / (count - 1) : 0.5);
    clips.push_back(make_fixture(spec));
  }
  return clips;
}

}  // namespace freev
