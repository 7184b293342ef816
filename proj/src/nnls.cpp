#include "freev/nnls.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

namespace freev {

namespace {

// Passive-set normal equations G_P z = f_P solved via LDLT. G is maintained
// incrementally as columns enter; rows/cols are compacted on removal, so the
// leading p x p block always corresponds to `idx`.
struct PassiveSystem {
  Mat ap;     // m x p gathered columns of A
  Mat gram;   // p x p, A_P^T A_P
  Vec rhs;    // p, A_P^T b
  std::vector<int> idx;

  void reserve(int m, int cap) {
    ap.resize(m, cap);
    gram.resize(cap, cap);
    rhs.resize(cap);
  }

  int size() const { return static_cast<int>(idx.size()); }

  void append(const Mat& a, const Vec& f, int j) {
    const int p = size();
    ap.col(p) = a.col(j);
    const Vec g = ap.leftCols(p + 1).transpose() * a.col(j);
    gram.block(0, p, p + 1, 1) = g;
    gram.block(p, 0, 1, p) = g.head(p).transpose();
    rhs[p] = f[j];
    idx.push_back(j);
  }

  void remove(int pos) {
    const int p = size();
    for (int r = pos; r < p - 1; ++r) {
      ap.col(r) = ap.col(r + 1);
      rhs[r] = rhs[r + 1];
    }
    for (int r = pos; r < p - 1; ++r)
      for (int c = 0; c < p; ++c) gram(r, c) = gram(r + 1, c);
    for (int c = pos; c < p - 1; ++c)
      for (int r = 0; r < p - 1; ++r) gram(r, c) = gram(r, c + 1);
    idx.erase(idx.begin() + pos);
  }

  Vec solve() const {
    const int p = size();
    return gram.topLeftCorner(p, p).ldlt().solve(rhs.head(p));
  }
};

}  // namespace

NnlsResult nnls(const Mat& a, const Vec& b, const NnlsOptions& opts) {
  if (a.rows() != b.size()) throw std::invalid_argument("nnls: A rows must match b size");
  if (opts.max_iter <= 0 || opts.tol <= 0)
    throw std::invalid_argument("nnls: max_iter and tol must be positive");

  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  const int cap = std::min(m, n) + 1;

  const Vec f = a.transpose() * b;
  const double scale = std::max(1.0, f.cwiseAbs().maxCoeff());
  const double tol = opts.tol * scale;

  Vec x = Vec::Zero(n);
  std::vector<char> passive(n, 0), banned(n, 0);
  PassiveSystem sys;
  sys.reserve(m, cap);

  Vec w = f;  // gradient A^T (b - A x) at x = 0
  int iter = 0;

  auto refresh_gradient = [&] {
    Vec r = b;
    for (int p = 0; p < sys.size(); ++p) r -= sys.ap.col(p) * x[sys.idx[p]];
    w.noalias() = a.transpose() * r;
  };

  while (true) {
    int j = -1;
    double best = tol;
    for (int i = 0; i < n; ++i) {
      if (!passive[i] && !banned[i] && w[i] > best) {
        best = w[i];
        j = i;
      }
    }
    if (j < 0 || sys.size() >= cap) break;

    sys.append(a, f, j);
    passive[j] = 1;

    bool x_changed = false;
    while (true) {
      if (++iter > opts.max_iter)
        throw std::runtime_error("nnls: no convergence within max_iter");
      const Vec z = sys.solve();
      double zmin = std::numeric_limits<double>::infinity();
      for (int p = 0; p < sys.size(); ++p) zmin = std::min(zmin, z[p]);
      if (zmin > 0) {
        for (int p = 0; p < sys.size(); ++p) x[sys.idx[p]] = z[p];
        x_changed = true;
        break;
      }
      // step toward z until the first passive coordinate hits zero
      double alpha = std::numeric_limits<double>::infinity();
      int block = -1;
      for (int p = 0; p < sys.size(); ++p) {
        if (z[p] <= 0) {
          const double xi = x[sys.idx[p]];
          const double denom = xi - z[p];
          const double ratio = denom > 0 ? xi / denom : 0.0;
          if (ratio < alpha) {
            alpha = ratio;
            block = p;
          }
        }
      }
      if (alpha == 0.0 && sys.idx[block] == j) {
        // entering column is numerically dependent on the passive set
        passive[j] = 0;
        banned[j] = 1;
        sys.remove(sys.size() - 1);
        break;
      }
      for (int p = 0; p < sys.size(); ++p) {
        const int i = sys.idx[p];
        x[i] += alpha * (z[p] - x[i]);
      }
      x[sys.idx[block]] = 0.0;
      for (int p = sys.size() - 1; p >= 0; --p) {
        if (x[sys.idx[p]] <= 0.0 && z[p] <= 0) {
          x[sys.idx[p]] = 0.0;
          passive[sys.idx[p]] = 0;
          sys.remove(p);
        }
      }
    }
    if (x_changed) std::fill(banned.begin(), banned.end(), 0);
    refresh_gradient();
  }

  NnlsResult res;
  res.x = std::move(x);
  res.iterations = iter;
  double kkt = 0.0;
  for (int i = 0; i < n; ++i) {
    if (passive[i])
      kkt = std::max(kkt, std::abs(w[i]));
    else
      kkt = std::max(kkt, std::max(w[i], 0.0));
  }
  res.kkt_residual = kkt / scale;
  return res;
}

}  // namespace freev
