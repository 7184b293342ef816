#include "freev/resample.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace freev {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kHalfWidth = 36;  // taps per side, in input samples
constexpr double kBeta = 9.0;

double bessel_i0(double x) {
  // power series; converges quickly for the beta range used here
  double sum = 1.0, term = 1.0;
  const double q = x * x / 4.0;
  for (int k = 1; k < 64; ++k) {
    term *= q / (k * k);
    sum += term;
    if (term < 1e-16 * sum) break;
  }
  return sum;
}

}  // namespace

std::vector<double> resample_sinc(const std::vector<double>& x, double sr_in, double sr_out) {
  if (sr_in <= 0 || sr_out <= 0)
    throw std::invalid_argument("resample_sinc: sample rates must be > 0");
  if (x.empty()) return {};
  if (sr_in == sr_out) return x;

  const int n_in = static_cast<int>(x.size());
  const int n_out = static_cast<int>(std::floor(n_in * sr_out / sr_in));
  const double step = sr_in / sr_out;              // input samples per output sample
  const double cutoff = 0.95 * std::min(1.0, sr_out / sr_in);  // of input Nyquist
  const double inv_i0 = 1.0 / bessel_i0(kBeta);

  std::vector<double> y(n_out);
  for (int i = 0; i < n_out; ++i) {
    const double center = i * step;
    const int lo = std::max(0, static_cast<int>(std::ceil(center)) - kHalfWidth);
    const int hi = std::min(n_in - 1, static_cast<int>(std::floor(center)) + kHalfWidth);
    double acc = 0.0;
    for (int m = lo; m <= hi; ++m) {
      const double d = m - center;
      const double u = d / kHalfWidth;
      const double win = bessel_i0(kBeta * std::sqrt(std::max(0.0, 1.0 - u * u))) * inv_i0;
      const double arg = kPi * cutoff * d;
      const double sinc = arg == 0.0 ? 1.0 : std::sin(arg) / arg;
      acc += x[m] * cutoff * sinc * win;
    }
    y[i] = acc;
  }
  return y;
}

}  // namespace freev
