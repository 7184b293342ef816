#pragma once

#include <vector>

namespace freev {

// Windowed-sinc (Kaiser, beta = 9) resampler. Anti-aliasing cutoff at 95% of
// the narrower Nyquist. Good to roughly -80 dB stopband; intended for metric
// preprocessing, not production rate conversion.
std::vector<double> resample_sinc(const std::vector<double>& x, double sr_in, double sr_out);

}  // namespace freev
