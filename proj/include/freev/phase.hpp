#pragma once

#include "freev/spectrogram.hpp"

namespace freev {

// Unconstrained conv outputs interpreted as pseudo real/imaginary parts.
struct PhaseComponents {
  Mat r;
  Mat i;
};

// Principal-value phase of (R, I): two-argument arctangent semantics, range
// (-pi, pi], with (0, 0) mapping to 0 by convention.
double parallel_phase(double r, double i);
PhaseSpectrogram parallel_phase(const PhaseComponents& pc, const SpectralConfig& cfg);

// Principal absolute deviation |x - 2*pi*round(x/(2*pi))|, range [0, pi].
double anti_wrap(double x);
Mat anti_wrap(const Mat& x);

// Classical phase-free baseline: `iters` rounds of istft -> stft -> replace
// magnitude, starting from zero phase. iters = 0 returns the zero phase.
PhaseSpectrogram griffin_lim(const AmplitudeSpectrogram& a, int iters);

}  // namespace freev
