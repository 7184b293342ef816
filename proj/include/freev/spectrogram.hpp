#pragma once

#include <Eigen/Core>
#include <complex>
#include <vector>

#include "freev/config.hpp"

namespace freev {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;

struct Waveform {
  std::vector<double> samples;
  double sample_rate = 22050.0;

  std::size_t size() const { return samples.size(); }
  double seconds() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

enum class AmpDomain { Linear, Log };

// All spectrogram matrices are frame-major: row t is frame t, columns are
// frequency (or mel) bins.
struct ComplexSpectrogram {
  CMat frames;  // T x n_freq
  SpectralConfig config;
};

struct AmplitudeSpectrogram {
  Mat frames;  // T x n_freq
  AmpDomain domain = AmpDomain::Linear;
  SpectralConfig config;
};

struct PhaseSpectrogram {
  Mat frames;  // T x n_freq, radians in (-pi, pi]
  SpectralConfig config;
};

struct MelSpectrogram {
  Mat frames;  // T x n_mels
  AmpDomain domain = AmpDomain::Linear;
};

}  // namespace freev
