#pragma once

#include <string>

namespace freev {

enum class WindowKind { Hann };

// Frame/transform geometry shared by every module. n_freq is always the
// one-sided bin count n_fft/2 + 1 (513 at the defaults).
struct SpectralConfig {
  double sample_rate = 22050.0;
  int n_fft = 1024;
  int hop = 256;
  int win_length = 1024;
  WindowKind window = WindowKind::Hann;
  bool center = true;  // reflect padding by n_fft/2 on both sides

  int n_freq() const { return n_fft / 2 + 1; }

  // Throws std::invalid_argument on hop/win/n_fft ordering violations or
  // non-positive sizes. COLA is checked separately (see dsp.hpp) because it
  // needs the materialized window.
  void validate() const;
};

enum class MelScale { Slaney, Htk };
enum class MelNorm { SlaneyArea, None };

struct MelConfig {
  int n_mels = 80;
  double f_min = 0.0;
  double f_max = 16000.0;  // clamped to Nyquist when the filterbank is built
  MelScale scale = MelScale::Slaney;
  MelNorm norm = MelNorm::SlaneyArea;

  double effective_f_max(double sample_rate) const;
  void validate(double sample_rate) const;
};

std::string to_string(MelScale scale);
std::string to_string(MelNorm norm);

}  // namespace freev
