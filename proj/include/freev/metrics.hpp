#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "freev/melbank.hpp"
#include "freev/spectrogram.hpp"

namespace freev {

struct PitchTrack {
  std::vector<double> f0;           // Hz, 0 when unvoiced
  std::vector<bool> voiced;
  std::vector<double> periodicity;  // [0, 1]
  int hop = 256;
};

struct YinOptions {
  double f_min = 65.0;
  double f_max = 1000.0;
  double threshold = 0.15;  // on the cumulative-mean-normalized difference
  int frame_length = 1024;
  int hop = 256;
};

// YIN difference-function tracker. Needs at least 4 pitch periods at f_min.
PitchTrack track_pitch(const Waveform& w, const YinOptions& opts = {});

// Mel-cepstral distortion, dB: mean over frames of (10*sqrt(2)/ln 10) *
// ||c_ref - c_deg||_2 over DCT cepstral coefficients 1..13 (c0 excluded),
// cepstra from the 80-band log-mel of each waveform.
double mcd(const Waveform& ref, const Waveform& deg, const MelFilterbank& fb);

// Cepstra rows include c0 at column 0; only columns 1..13 enter the distance.
double mcd_from_cepstra(const Mat& c_ref, const Mat& c_deg);

// Orthonormal DCT-II of each row, keeping `n_coeff` coefficients.
Mat dct_rows(const Mat& x, int n_coeff);

// RMSE between log amplitude spectra of two waveforms (common frames).
double las_rmse(const Waveform& ref, const Waveform& deg, const SpectralConfig& cfg);

struct F0Metrics {
  std::optional<double> f0_rmse;  // Hz, over frames voiced in both; absent if none
  double vuv_f1 = 0.0;
  double periodicity_err = 0.0;   // RMSE over all frames
};

F0Metrics f0_metrics(const PitchTrack& ref, const PitchTrack& deg);

// Standard (non-extended) STOI: both signals resampled to 10 kHz, 15
// one-third-octave bands over 150..4.3k Hz, 384 ms segments, clipped
// normalized correlation. Needs >= 384 ms of signal after silence removal.
double stoi(const Waveform& ref, const Waveform& deg);

// Wall-clock seconds per synthesized second: median of `runs` timed calls
// after `warmup` untimed ones. synthesized_seconds must be > 0.
double rtf_measure(const std::function<void()>& run, double synthesized_seconds, int runs = 5,
                   int warmup = 1);

struct MetricReport {
  double mcd = 0.0;
  double las_rmse = 0.0;
  double vuv_f1 = 0.0;
  double periodicity_err = 0.0;
  std::optional<double> f0_rmse;
  double stoi = 0.0;
};

MetricReport evaluate_metrics(const Waveform& ref, const Waveform& deg, const MelFilterbank& fb);

}  // namespace freev
