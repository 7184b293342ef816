#pragma once

#include "freev/spectrogram.hpp"

namespace freev {

struct NnlsOptions {
  int max_iter = 500;
  double tol = 1e-8;  // KKT tolerance, scaled by max(1, ||A^T b||_inf)
};

struct NnlsResult {
  Vec x;
  int iterations = 0;
  // max(positive gradient on free set, |gradient| on passive set) divided by
  // max(1, ||A^T b||_inf) at the returned point.
  double kkt_residual = 0.0;
};

// min ||A x - b||_2 subject to x >= 0, Lawson-Hanson active set.
// Throws std::runtime_error when max_iter is exhausted before convergence.
NnlsResult nnls(const Mat& a, const Vec& b, const NnlsOptions& opts = {});

}  // namespace freev
