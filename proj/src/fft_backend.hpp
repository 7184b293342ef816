#pragma once

#include <complex>
#include <vector>

namespace freev::detail {

// Real <-> half-complex FFT pair of a fixed size, backed by FFTW (double
// precision, FFTW_ESTIMATE plans so planning is deterministic). Instances are
// not thread-safe; create one per thread of use. Plan creation/destruction is
// internally serialized.
class RealFft {
 public:
  explicit RealFft(int n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  int size() const { return n_; }
  int n_bins() const { return n_ / 2 + 1; }

  // out has n/2+1 bins; unnormalized forward transform.
  void forward(const double* in, std::complex<double>* out);
  // Inverse of forward divided by n (so inverse(forward(x)) == x).
  void inverse(const std::complex<double>* in, double* out);

 private:
  int n_;
  void* plan_fwd_;
  void* plan_inv_;
  double* real_buf_;
  void* cplx_buf_;
};

}  // namespace freev::detail
