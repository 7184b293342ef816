#pragma once

#include "freev/melbank.hpp"
#include "freev/spectrogram.hpp"

namespace freev {

// Generator loss weights. Values follow the APNet2 public release convention
// (lambda_A = 45, lambda_P = 100, lambda_S = 20, lambda_W = 45); the
// adversarial and feature-matching terms inside the lambda_W group are
// structurally present but pinned to 0 here (no discriminator in scope).
struct LossWeights {
  double lambda_a = 45.0;
  double lambda_p = 100.0;
  double lambda_s = 20.0;
  double lambda_w = 45.0;
};

struct PhaseLossTerms {
  double inst = 0.0;  // instantaneous phase
  double gd = 0.0;    // group delay (first difference along frequency)
  double ptd = 0.0;   // phase time difference (first difference along time)
};

struct StftLossTerms {
  double consistency = 0.0;
  double l1 = 0.0;
};

struct LossBreakdown {
  double amplitude = 0.0;
  double inst_phase = 0.0;
  double group_delay = 0.0;
  double phase_time_diff = 0.0;
  double stft_consistency = 0.0;
  double stft_l1 = 0.0;
  double mel_l1 = 0.0;
  double total = 0.0;
};

// Mean squared difference of two log-amplitude spectrograms.
double amplitude_loss(const AmplitudeSpectrogram& pred, const AmplitudeSpectrogram& ref);

// Anti-wrapped L1 phase losses. Needs >= 2 frames (ptd) and >= 2 bins (gd).
PhaseLossTerms phase_losses(const PhaseSpectrogram& pred, const PhaseSpectrogram& ref);

// consistency = mean |pred - stft(istft(pred))| over real and imaginary parts;
// l1 uses ref instead of the reprojection.
StftLossTerms stft_losses(const ComplexSpectrogram& pred, const ComplexSpectrogram& ref);

// L1 between log-mel spectrograms of two waveforms (truncated to the shorter).
double mel_l1(const Waveform& pred, const Waveform& ref, const MelFilterbank& fb);

// total = lambda_a*A + lambda_p*(inst+gd+ptd) + lambda_s*(consistency+l1)
//         + lambda_w*(mel + 0 + 0)
LossBreakdown total_generator_loss(double amplitude, const PhaseLossTerms& phase,
                                   const StftLossTerms& stft_terms, double mel,
                                   const LossWeights& w);

// Full forward evaluation for a (pred, ref) waveform pair; spectra are
// truncated to the common frame count.
LossBreakdown evaluate_losses(const Waveform& pred, const Waveform& ref,
                              const MelFilterbank& fb, const LossWeights& w = {});

}  // namespace freev
