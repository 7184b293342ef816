#pragma once

#include <utility>

#include "freev/spectrogram.hpp"

namespace freev {

// Periodic Hann window of length win_length, zero-padded (centered) to n_fft.
Vec make_window(const SpectralConfig& cfg);

// Max relative deviation of the overlap-added squared window from its mean,
// evaluated over one interior hop period. Must be < 1e-10 for ISTFT use.
double cola_squared_deviation(const SpectralConfig& cfg);

// Frames: T = 1 + floor(N/hop) with center=true (reflect-padded), otherwise
// T = 1 + floor((N - n_fft)/hop). Unnormalized forward DFT per frame.
ComplexSpectrogram stft(const Waveform& w, const SpectralConfig& cfg);

// Overlap-add with squared-window normalization (denominator floored at
// 1e-11). center=true trims n_fft/2 on both sides; output length (T-1)*hop.
Waveform istft(const ComplexSpectrogram& s);

// A = |s|, phi = angle(s) in (-pi, pi], with angle(0) = 0.
std::pair<AmplitudeSpectrogram, PhaseSpectrogram> polar_split(const ComplexSpectrogram& s);

// s = a .* exp(j*phi). Rejects Log-domain amplitudes.
ComplexSpectrogram recombine(const AmplitudeSpectrogram& a, const PhaseSpectrogram& p);

}  // namespace freev
