#pragma once

#include <string>
#include <vector>

#include "freev/melbank.hpp"
#include "freev/nnls.hpp"
#include "freev/spectrogram.hpp"

namespace freev {

enum class PriorVariant { Nnls, LeastSquares, PseudoInverse, PseudoInverseAbs };

struct PriorMethod {
  PriorVariant variant = PriorVariant::PseudoInverseAbs;
  int nnls_max_iter = 500;
  double nnls_tol = 1e-8;
};

std::string to_string(PriorVariant v);
PriorVariant prior_variant_from_string(const std::string& name);

// Amplitude estimate from a linear mel spectrogram. Every variant's output is
// >= 1e-5 elementwise:
//   Nnls             per-frame min ||M a - x||, a >= 0 (Lawson-Hanson), then floor
//   LeastSquares     minimum-norm solve re-run through the cached SVD factors, then floor
//   PseudoInverse    max(M+ X, 1e-5)
//   PseudoInverseAbs max(|M+ X|, 1e-5)
AmplitudeSpectrogram estimate_prior(const MelSpectrogram& x, const MelFilterbank& fb,
                                    const PriorMethod& m);

struct MethodBench {
  std::string name;
  double seconds_per_clip = 0.0;  // median over timed per-clip invocations
  double las_rmse = 0.0;          // over all cells of all clips, natural log
  std::vector<double> per_clip_las_rmse;
};

struct BenchReport {
  int clip_count = 0;
  double clip_seconds = 0.0;  // mean clip duration
  std::string hardware;
  int reps = 0;    // timed invocations per method
  int warmup = 0;
  int threads = 1;
  std::vector<MethodBench> methods;
};

struct BenchOptions {
  int min_reps = 10;  // timed invocations per method are >= this
  int warmup = 2;
};

// Features are extracted once (untimed); timing covers prior computation only.
// Single-threaded by construction for reproducible numbers.
BenchReport bench_priors(const std::vector<Waveform>& clips, const MelFilterbank& fb,
                         const std::vector<PriorMethod>& methods,
                         const BenchOptions& opts = {});

std::string format_table1(const BenchReport& report);

}  // namespace freev
