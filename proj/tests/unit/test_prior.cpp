#include <Eigen/QR>

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "freev/dsp.hpp"
#include "freev/fixtures.hpp"
#include "freev/melbank.hpp"
#include "freev/nnls.hpp"
#include "freev/prior.hpp"

using namespace freev;

namespace {

// Exhaustive oracle: enumerate every support, solve the unconstrained
// minimum-norm LS on it, keep feasible candidates, pick the best residual
// (ties by norm). Exponential; toy sizes only.
Vec nnls_bruteforce(const Mat& a, const Vec& b) {
  const int n = static_cast<int>(a.cols());
  Vec best;
  double best_res = std::numeric_limits<double>::infinity();
  double best_norm = std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<int> sup;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) sup.push_back(i);
    Vec x = Vec::Zero(n);
    if (!sup.empty()) {
      Mat as(a.rows(), sup.size());
      for (std::size_t c = 0; c < sup.size(); ++c) as.col(c) = a.col(sup[c]);
      const Vec xs = as.completeOrthogonalDecomposition().solve(b);
      bool feasible = true;
      for (Eigen::Index i = 0; i < xs.size(); ++i)
        if (xs[i] < -1e-12) feasible = false;
      if (!feasible) continue;
      for (std::size_t c = 0; c < sup.size(); ++c) x[sup[c]] = std::max(xs[c], 0.0);
    }
    const double res = (a * x - b).norm();
    const double norm = x.norm();
    if (res < best_res - 1e-12 || (std::abs(res - best_res) <= 1e-12 && norm < best_norm)) {
      best_res = res;
      best_norm = norm;
      best = x;
    }
  }
  return best;
}

MelSpectrogram mel_of(const Waveform& w, const MelFilterbank& fb) {
  return apply_mel(polar_split(stft(w, fb.spectral_config)).first, fb);
}

}  // namespace

TEST_CASE("nnls matches brute force on the 3-bin x 2-mel toy system") {
  Mat m(2, 3);
  m << 1, 0, 0,
       0, 1, 1;
  SUBCASE("mixed-sign rhs") {
    Vec b(2);
    b << 2, -1;
    const NnlsResult r = nnls(m, b);
    const Vec oracle = nnls_bruteforce(m, b);
    CHECK((r.x - oracle).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(r.x[0] == doctest::Approx(2.0));
    CHECK(r.x[1] == 0.0);
    CHECK(r.x[2] == 0.0);
  }
  SUBCASE("all-positive rhs") {
    Vec b(2);
    b << 1, 3;
    const NnlsResult r = nnls(m, b);
    const Vec oracle = nnls_bruteforce(m, b);
    CHECK((m * r.x - b).norm() == doctest::Approx((m * oracle - b).norm()).epsilon(1e-12));
    CHECK(r.x.minCoeff() >= 0.0);
  }
}

TEST_CASE("nnls matches brute force on random small systems") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> dist;
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = 2 + static_cast<int>(rng() % 3);  // 2..4
    const int cols = 2 + static_cast<int>(rng() % 4);  // 2..5
    Mat a(rows, cols);
    Vec b(rows);
    for (int r = 0; r < rows; ++r) {
      b[r] = dist(rng);
      for (int c = 0; c < cols; ++c) a(r, c) = dist(rng);
    }
    const NnlsResult r = nnls(a, b);
    const Vec oracle = nnls_bruteforce(a, b);
    CHECK(r.x.minCoeff() >= 0.0);
    CHECK((a * r.x - b).norm() <= (a * oracle - b).norm() + 1e-9);
  }
}

TEST_CASE("nnls KKT conditions hold at convergence on filterbank frames") {
  const MelFilterbank fb = build_filterbank(SpectralConfig{}, MelConfig{});
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Vec b(fb.n_mels());
    for (int i = 0; i < fb.n_mels(); ++i) b[i] = dist(rng);
    const NnlsResult r = nnls(fb.m, b);
    CHECK(r.x.minCoeff() >= 0.0);
    CHECK(r.kkt_residual < 1e-6);
  }
}

TEST_CASE("nnls throws on exhausted iterations, with frame context from estimate_prior") {
  const MelFilterbank fb = build_filterbank(SpectralConfig{}, MelConfig{});
  Vec b = Vec::Ones(fb.n_mels());
  NnlsOptions opts;
  opts.max_iter = 3;
  CHECK_THROWS_AS(nnls(fb.m, b, opts), std::runtime_error);

  MelSpectrogram x;
  x.domain = AmpDomain::Linear;
  x.frames = Mat::Ones(2, fb.n_mels());
  PriorMethod m;
  m.variant = PriorVariant::Nnls;
  m.nnls_max_iter = 3;
  CHECK_THROWS_WITH_AS(estimate_prior(x, fb, m),
                       doctest::Contains("frame 0"), std::runtime_error);
}

TEST_CASE("pseudo-inverse recovers row-space amplitudes fed through the mel map") {
  const MelFilterbank fb = build_filterbank(SpectralConfig{}, MelConfig{});
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> dist(0.1, 1.0);
  Vec coeff(fb.n_mels());
  for (int i = 0; i < fb.n_mels(); ++i) coeff[i] = dist(rng);
  // A = M^T c lies in the row space of M
  Mat a_true = (fb.m.transpose() * coeff).transpose();

  AmplitudeSpectrogram amp{a_true, AmpDomain::Linear, fb.spectral_config};
  const MelSpectrogram x = apply_mel(amp, fb);

  PriorMethod pi;
  pi.variant = PriorVariant::PseudoInverse;
  const Mat rec = estimate_prior(x, fb, pi).frames;
  const Mat expected = a_true.cwiseMax(kAmpFloor);
  CHECK((rec - expected).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("every estimator floors at 1e-5 and PI == PI-abs where the product is >= 1e-5") {
  const MelFilterbank fb = build_filterbank(SpectralConfig{}, MelConfig{});
  FixtureSpec spec;
  spec.kind = FixtureKind::HarmonicVoice;
  spec.duration = 0.5;
  spec.f0 = 200.0;
  spec.seed = 3;
  const Waveform w = make_fixture(spec);
  const MelSpectrogram x = mel_of(w, fb);

  const Mat raw = x.frames * fb.m_pinv.transpose();
  for (PriorVariant v : {PriorVariant::Nnls, PriorVariant::LeastSquares,
                         PriorVariant::PseudoInverse, PriorVariant::PseudoInverseAbs}) {
    PriorMethod m;
    m.variant = v;
    const Mat est = estimate_prior(x, fb, m).frames;
    CHECK(est.minCoeff() >= kAmpFloor);
  }

  PriorMethod pi{PriorVariant::PseudoInverse, 500, 1e-8};
  PriorMethod pa{PriorVariant::PseudoInverseAbs, 500, 1e-8};
  const Mat est_pi = estimate_prior(x, fb, pi).frames;
  const Mat est_pa = estimate_prior(x, fb, pa).frames;
  for (Eigen::Index t = 0; t < raw.rows(); ++t)
    for (Eigen::Index k = 0; k < raw.cols(); ++k)
      if (raw(t, k) >= kAmpFloor) CHECK(est_pi(t, k) == est_pa(t, k));
}

TEST_CASE("LS and PI agree numerically (same minimum-norm solution)") {
  const MelFilterbank fb = build_filterbank(SpectralConfig{}, MelConfig{});
  FixtureSpec spec;
  spec.kind = FixtureKind::HarmonicVoice;
  spec.duration = 0.4;
  spec.f0 = 180.0;
  spec.seed = 21;
  const MelSpectrogram x = mel_of(make_fixture(spec), fb);
  const Mat ls = estimate_prior(x, fb, {PriorVariant::LeastSquares, 500, 1e-8}).frames;
  const Mat pi = estimate_prior(x, fb, {PriorVariant::PseudoInverse, 500, 1e-8}).frames;
  CHECK((ls - pi).cwiseAbs().maxCoeff() < 1e-9 * std::max(1.0, pi.maxCoeff()));
}

TEST_CASE("unconstrained least-norm residual lower-bounds the NNLS residual") {
  const MelFilterbank fb = build_filterbank(SpectralConfig{}, MelConfig{});
  FixtureSpec spec;
  spec.kind = FixtureKind::HarmonicVoice;
  spec.duration = 0.25;
  spec.f0 = 240.0;
  spec.seed = 5;
  const MelSpectrogram x = mel_of(make_fixture(spec), fb);

  const Mat raw_pi = x.frames * fb.m_pinv.transpose();
  const Mat nn = estimate_prior(x, fb, {PriorVariant::Nnls, 500, 1e-8}).frames;
  // compare in the mel domain, frame by frame (floor removed from NNLS output
  // cells only matters below 1e-5, which is within the stated tolerance)
  const double res_pi = (raw_pi * fb.m.transpose() - x.frames).norm();
  const double res_nn = (nn * fb.m.transpose() - x.frames).norm();
  CHECK(res_pi <= res_nn + 1e-6);
}

TEST_CASE("silent clip: every estimator collapses to the floor and LAS-RMSE is 0") {
  const MelFilterbank fb = build_filterbank(SpectralConfig{}, MelConfig{});
  FixtureSpec spec;
  spec.kind = FixtureKind::Silence;
  spec.duration = 0.3;
  std::vector<Waveform> clips{make_fixture(spec)};
  std::vector<PriorMethod> methods;
  for (PriorVariant v : {PriorVariant::Nnls, PriorVariant::LeastSquares,
                         PriorVariant::PseudoInverse, PriorVariant::PseudoInverseAbs})
    methods.push_back({v, 500, 1e-8});
  BenchOptions opts;
  opts.min_reps = 2;
  opts.warmup = 1;
  const BenchReport report = bench_priors(clips, fb, methods, opts);
  for (const auto& m : report.methods) CHECK(m.las_rmse == doctest::Approx(0.0));
}

TEST_CASE("bench_priors rejects an empty clip list") {
  const MelFilterbank fb = build_filterbank(SpectralConfig{}, MelConfig{});
  CHECK_THROWS_AS(bench_priors({}, fb, {{PriorVariant::PseudoInverse, 500, 1e-8}}, {}),
                  std::invalid_argument);
}

TEST_CASE("method name parsing round-trips") {
  CHECK(prior_variant_from_string("nnls") == PriorVariant::Nnls);
  CHECK(prior_variant_from_string("ls") == PriorVariant::LeastSquares);
  CHECK(prior_variant_from_string("pi") == PriorVariant::PseudoInverse);
  CHECK(prior_variant_from_string("pi-abs") == PriorVariant::PseudoInverseAbs);
  CHECK_THROWS_AS(prior_variant_from_string("gradient"), std::invalid_argument);
}
