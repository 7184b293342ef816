#include "freev/config.hpp"

#include <algorithm>
#include <stdexcept>

namespace freev {

void SpectralConfig::validate() const {
  if (sample_rate <= 0) throw std::invalid_argument("SpectralConfig: sample_rate must be > 0");
  if (n_fft <= 0 || hop <= 0 || win_length <= 0)
    throw std::invalid_argument("SpectralConfig: n_fft, hop and win_length must be > 0");
  if (!(hop <= win_length && win_length <= n_fft))
    throw std::invalid_argument("SpectralConfig: need hop <= win_length <= n_fft");
}

double MelConfig::effective_f_max(double sample_rate) const {
  return std::min(f_max, sample_rate / 2.0);
}

void MelConfig::validate(double sample_rate) const {
  if (n_mels < 1) throw std::invalid_argument("MelConfig: n_mels must be >= 1");
  if (f_min < 0) throw std::invalid_argument("MelConfig: f_min must be >= 0");
  if (f_min >= effective_f_max(sample_rate))
    throw std::invalid_argument("MelConfig: f_min must be below f_max (after Nyquist clamp)");
}

std::string to_string(MelScale scale) {
  return scale == MelScale::Slaney ? "slaney" : "htk";
}

std::string to_string(MelNorm norm) {
  return norm == MelNorm::SlaneyArea ? "slaney_area" : "none";
}

}  // namespace freev
