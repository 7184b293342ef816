#include "freev/net.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "freev/dsp.hpp"

namespace freev {

namespace {

constexpr double kEps = 1e-6;
constexpr double kSqrtHalf = 0.70710678118654752440;
constexpr double kTwoPi = 6.28318530717958647692;

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x * kSqrtHalf)); }

// Deterministic normal generator (mt19937_64 + Box-Muller), fan-in scaled.
class WeightRng {
 public:
  explicit WeightRng(std::uint64_t seed) : rng_(seed) {}

  double normal() {
    if (have_) {
      have_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    have_ = true;
    return r * std::cos(kTwoPi * u2);
  }

  Mat matrix(int rows, int cols, double scale) {
    Mat m(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) m(r, c) = scale * normal();
    return m;
  }

  Vec vector(int n, double scale) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = scale * normal();
    return v;
  }

 private:
  double uniform() { return (rng_() >> 11) * 0x1.0p-53; }
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_ = false;
};

std::size_t conv1d_params(int in, int out, int kernel) {
  return static_cast<std::size_t>(in) * out * kernel + out;
}

std::size_t block_params(int dim, int hidden, int kernel) {
  return static_cast<std::size_t>(dim) * kernel + dim  // depthwise
         + 2 * static_cast<std::size_t>(dim)           // layernorm
         + static_cast<std::size_t>(dim) * hidden + hidden
         + 2 * static_cast<std::size_t>(hidden)        // grn
         + static_cast<std::size_t>(hidden) * dim + dim;
}

Conv1dWeights make_conv(WeightRng& rng, int in, int out, int kernel) {
  Conv1dWeights w;
  const double scale = 1.0 / std::sqrt(static_cast<double>(in) * kernel);
  w.taps.reserve(kernel);
  for (int k = 0; k < kernel; ++k) w.taps.push_back(rng.matrix(out, in, scale));
  w.bias = rng.vector(out, 0.01);
  return w;
}

ConvNeXtV2BlockWeights make_block(WeightRng& rng, int dim, int hidden, int kernel) {
  ConvNeXtV2BlockWeights b;
  b.dw_weight = rng.matrix(dim, kernel, 1.0 / std::sqrt(static_cast<double>(kernel)));
  b.dw_bias = rng.vector(dim, 0.01);
  b.norm_gamma = Vec::Ones(dim) + rng.vector(dim, 0.01);
  b.norm_beta = rng.vector(dim, 0.01);
  b.pw1_weight = rng.matrix(hidden, dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  b.pw1_bias = rng.vector(hidden, 0.01);
  b.grn_gamma = rng.vector(hidden, 0.1);
  b.grn_beta = rng.vector(hidden, 0.01);
  b.pw2_weight = rng.matrix(dim, hidden, 1.0 / std::sqrt(static_cast<double>(hidden)));
  b.pw2_bias = rng.vector(dim, 0.01);
  return b;
}

}  // namespace

Mat conv1d(const Mat& x, const Conv1dWeights& w) {
  if (x.cols() != w.in_dim()) throw std::invalid_argument("conv1d: input dim mismatch");
  const Eigen::Index T = x.rows();
  const int K = w.kernel();
  const int half = (K - 1) / 2;
  Mat y = Mat::Zero(T, w.out_dim());
  y.rowwise() += w.bias.transpose();
  for (int k = 0; k < K; ++k) {
    const int off = k - half;
    const Eigen::Index lo = std::max<Eigen::Index>(0, -off);
    const Eigen::Index hi = std::min<Eigen::Index>(T, T - off);
    if (hi <= lo) continue;
    y.middleRows(lo, hi - lo).noalias() +=
        x.middleRows(lo + off, hi - lo) * w.taps[static_cast<std::size_t>(k)].transpose();
  }
  return y;
}

std::size_t ConvNeXtV2BlockWeights::parameter_count() const {
  return block_params(dim(), hidden(), kernel());
}

Mat convnext_v2_block(const Mat& x, const ConvNeXtV2BlockWeights& w) {
  const int dim = w.dim();
  if (x.cols() != dim) throw std::invalid_argument("convnext_v2_block: dim mismatch");
  const Eigen::Index T = x.rows();
  const int K = w.kernel();
  const int half = (K - 1) / 2;

  // depthwise conv along time, zero-padded same
  Mat h = Mat::Zero(T, dim);
  for (Eigen::Index t = 0; t < T; ++t) {
    for (int k = 0; k < K; ++k) {
      const Eigen::Index src = t + k - half;
      if (src < 0 || src >= T) continue;
      h.row(t) += x.row(src).cwiseProduct(w.dw_weight.col(k).transpose());
    }
    h.row(t) += w.dw_bias.transpose();
  }

  // layernorm over channels per time step
  for (Eigen::Index t = 0; t < T; ++t) {
    const double mean = h.row(t).mean();
    const double var = (h.row(t).array() - mean).square().mean();
    h.row(t) = (((h.row(t).array() - mean) / std::sqrt(var + kEps)) *
                    w.norm_gamma.transpose().array() +
                w.norm_beta.transpose().array())
                   .matrix();
  }

  // expand, GELU
  Mat g = h * w.pw1_weight.transpose();
  g.rowwise() += w.pw1_bias.transpose();
  g = g.unaryExpr([](double v) { return gelu(v); });

  // GRN: per-channel L2 over time, normalized by the channel mean
  Vec gx(g.cols());
  for (Eigen::Index c = 0; c < g.cols(); ++c) gx[c] = g.col(c).norm();
  const double mean_norm = gx.mean();
  const Vec nx = gx / (mean_norm + kEps);
  for (Eigen::Index c = 0; c < g.cols(); ++c)
    g.col(c) = w.grn_gamma[c] * (g.col(c) * nx[c]) + Vec::Constant(T, w.grn_beta[c]) + g.col(c);

  // project back and add the residual
  Mat out = g * w.pw2_weight.transpose();
  out.rowwise() += w.pw2_bias.transpose();
  return x + out;
}

void NetManifest::validate() const {
  if (format_version != 1) throw std::invalid_argument("NetManifest: unknown format version");
  if (n_mels < 1 || n_freq < 1 || psp_dim < 1 || hidden < 1)
    throw std::invalid_argument("NetManifest: dimensions must be positive");
  if (psp_blocks < 0 || asp_blocks < 0)
    throw std::invalid_argument("NetManifest: block counts must be >= 0");
  if (kernel < 1 || kernel % 2 == 0)
    throw std::invalid_argument("NetManifest: kernel must be odd and >= 1");
}

std::size_t GeneratorWeights::parameter_count() const {
  std::size_t total = conv1d_params(manifest.n_mels, manifest.psp_dim, manifest.kernel);
  for (const auto& b : psp_blocks) total += b.parameter_count();
  total += 2 * conv1d_params(manifest.psp_dim, manifest.n_freq, manifest.kernel);
  for (const auto& b : asp_blocks) total += b.parameter_count();
  return total;
}

AmplitudeSpectrogram asp_forward(const MelSpectrogram& x, const MelFilterbank& fb,
                                 const GeneratorWeights& w) {
  PriorMethod method;
  method.variant = PriorVariant::PseudoInverseAbs;
  const AmplitudeSpectrogram prior = estimate_prior(x, fb, method);
  AmplitudeSpectrogram out = log_compress(prior);
  for (const auto& b : w.asp_blocks) out.frames = convnext_v2_block(out.frames, b);
  return out;
}

PhaseSpectrogram psp_forward(const MelSpectrogram& x, const SpectralConfig& cfg,
                             const GeneratorWeights& w) {
  if (x.frames.cols() != w.manifest.n_mels)
    throw std::invalid_argument("psp_forward: mel band count mismatch");
  Mat h = conv1d(x.frames, w.psp_in);
  for (const auto& b : w.psp_blocks) h = convnext_v2_block(h, b);
  PhaseComponents pc;
  pc.r = conv1d(h, w.psp_out_r);
  pc.i = conv1d(h, w.psp_out_i);
  return parallel_phase(pc, cfg);
}

VocodeResult vocode(const MelSpectrogram& x, const MelFilterbank& fb,
                    const GeneratorWeights& w, const PhaseSpectrogram* phase_override) {
  VocodeResult res;
  res.prior_log_amp = log_compress(estimate_prior(
      x, fb, PriorMethod{PriorVariant::PseudoInverseAbs, 500, 1e-8}));
  res.pred_log_amp = asp_forward(x, fb, w);
  res.pred_phase =
      phase_override ? *phase_override : psp_forward(x, fb.spectral_config, w);
  if (res.pred_phase.frames.rows() != res.pred_log_amp.frames.rows() ||
      res.pred_phase.frames.cols() != res.pred_log_amp.frames.cols())
    throw std::invalid_argument("vocode: phase/amplitude shape mismatch");
  const ComplexSpectrogram s = recombine(log_expand(res.pred_log_amp), res.pred_phase);
  res.waveform = istft(s);
  return res;
}

GeneratorWeights gen_weights(std::uint64_t seed, const NetManifest& manifest) {
  manifest.validate();
  WeightRng rng(seed);
  GeneratorWeights w;
  w.manifest = manifest;
  w.psp_in = make_conv(rng, manifest.n_mels, manifest.psp_dim, manifest.kernel);
  for (int i = 0; i < manifest.psp_blocks; ++i)
    w.psp_blocks.push_back(make_block(rng, manifest.psp_dim, manifest.hidden, manifest.kernel));
  w.psp_out_r = make_conv(rng, manifest.psp_dim, manifest.n_freq, manifest.kernel);
  w.psp_out_i = make_conv(rng, manifest.psp_dim, manifest.n_freq, manifest.kernel);
  for (int i = 0; i < manifest.asp_blocks; ++i)
    w.asp_blocks.push_back(make_block(rng, manifest.n_freq, manifest.hidden, manifest.kernel));
  return w;
}

std::size_t param_count_freev(const NetManifest& m) {
  std::size_t total = conv1d_params(m.n_mels, m.psp_dim, m.kernel);
  total += static_cast<std::size_t>(m.psp_blocks) * block_params(m.psp_dim, m.hidden, m.kernel);
  total += 2 * conv1d_params(m.psp_dim, m.n_freq, m.kernel);
  total += static_cast<std::size_t>(m.asp_blocks) * block_params(m.n_freq, m.hidden, m.kernel);
  return total;
}

std::size_t param_count_apnet2_shaped(const NetManifest& m) {
  // same PSP; ASP gets an input conv, 8 blocks at psp_dim and an output conv
  std::size_t total = conv1d_params(m.n_mels, m.psp_dim, m.kernel);
  total += static_cast<std::size_t>(m.psp_blocks) * block_params(m.psp_dim, m.hidden, m.kernel);
  total += 2 * conv1d_params(m.psp_dim, m.n_freq, m.kernel);
  total += conv1d_params(m.n_mels, m.psp_dim, m.kernel);
  total += 8 * block_params(m.psp_dim, m.hidden, m.kernel);
  total += conv1d_params(m.psp_dim, m.n_freq, m.kernel);
  return total;
}

ParamReport param_report(const GeneratorWeights& w) {
  ParamReport r;
  r.psp_total = conv1d_params(w.manifest.n_mels, w.manifest.psp_dim, w.manifest.kernel) +
                2 * conv1d_params(w.manifest.psp_dim, w.manifest.n_freq, w.manifest.kernel);
  for (const auto& b : w.psp_blocks) r.psp_total += b.parameter_count();
  r.asp_total = 0;
  for (const auto& b : w.asp_blocks) r.asp_total += b.parameter_count();
  r.total = r.psp_total + r.asp_total;
  r.apnet2_shaped_total = param_count_apnet2_shaped(w.manifest);
  return r;
}

}  // namespace freev
