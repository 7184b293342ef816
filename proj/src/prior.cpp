#include "freev/prior.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "freev/dsp.hpp"

namespace freev {

namespace {

using Clock = std::chrono::steady_clock;

Mat floor_at(Mat m) {
  return m.unaryExpr([](double v) { return std::max(v, kAmpFloor); });
}

std::string cpu_model() {
  std::ifstream is("/proc/cpuinfo");
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto pos = line.find(':');
      if (pos != std::string::npos) return line.substr(pos + 2);
    }
  }
  return "unknown CPU";
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::string to_string(PriorVariant v) {
  switch (v) {
    case PriorVariant::Nnls: return "NNLS";
    case PriorVariant::LeastSquares: return "LS";
    case PriorVariant::PseudoInverse: return "PI";
    case PriorVariant::PseudoInverseAbs: return "PI w/ abs";
  }
  return "?";
}

PriorVariant prior_variant_from_string(const std::string& name) {
  if (name == "nnls") return PriorVariant::Nnls;
  if (name == "ls") return PriorVariant::LeastSquares;
  if (name == "pi") return PriorVariant::PseudoInverse;
  if (name == "pi-abs" || name == "pi_abs") return PriorVariant::PseudoInverseAbs;
  throw std::invalid_argument("unknown prior method: " + name +
                              " (expected nnls, ls, pi or pi-abs)");
}

AmplitudeSpectrogram estimate_prior(const MelSpectrogram& x, const MelFilterbank& fb,
                                    const PriorMethod& m) {
  if (x.domain != AmpDomain::Linear)
    throw std::invalid_argument("estimate_prior: mel input must be in the linear domain");
  if (x.frames.cols() != fb.n_mels())
    throw std::invalid_argument("estimate_prior: mel band count does not match filterbank");

  AmplitudeSpectrogram out;
  out.domain = AmpDomain::Linear;
  out.config = fb.spectral_config;

  switch (m.variant) {
    case PriorVariant::PseudoInverse:
      out.frames = floor_at(x.frames * fb.m_pinv.transpose());
      break;
    case PriorVariant::PseudoInverseAbs:
      out.frames = floor_at((x.frames * fb.m_pinv.transpose()).cwiseAbs());
      break;
    case PriorVariant::LeastSquares: {
      // min-norm LS re-run through the SVD factors each call
      Mat tmp = x.frames * fb.svd_u;
      tmp = tmp * fb.svd_s_inv.asDiagonal();
      out.frames = floor_at(tmp * fb.svd_v.transpose());
      break;
    }
    case PriorVariant::Nnls: {
      NnlsOptions opts;
      opts.max_iter = m.nnls_max_iter;
      opts.tol = m.nnls_tol;
      const Eigen::Index T = x.frames.rows();
      out.frames.resize(T, fb.n_freq());
      for (Eigen::Index t = 0; t < T; ++t) {
        try {
          const NnlsResult r = nnls(fb.m, x.frames.row(t).transpose(), opts);
          out.frames.row(t) = r.x.transpose();
        } catch (const std::runtime_error& e) {
          std::ostringstream msg;
          msg << "estimate_prior: NNLS failed at frame " << t << ": " << e.what();
          throw std::runtime_error(msg.str());
        }
      }
      out.frames = floor_at(std::move(out.frames));
      break;
    }
  }
  return out;
}

BenchReport bench_priors(const std::vector<Waveform>& clips, const MelFilterbank& fb,
                         const std::vector<PriorMethod>& methods, const BenchOptions& opts) {
  if (clips.empty()) throw std::invalid_argument("bench_priors: empty clip list");
  if (methods.empty()) throw std::invalid_argument("bench_priors: no methods selected");

  // features once, untimed: ground truth A = |STFT|, input X = mel(A)
  std::vector<Mat> mel_frames, log_true;
  mel_frames.reserve(clips.size());
  log_true.reserve(clips.size());
  double total_seconds = 0.0;
  for (const auto& clip : clips) {
    const auto [amp, phase] = polar_split(stft(clip, fb.spectral_config));
    mel_frames.push_back(apply_mel(amp, fb).frames);
    log_true.push_back(log_compress(amp.frames));
    total_seconds += clip.seconds();
  }

  BenchReport report;
  report.clip_count = static_cast<int>(clips.size());
  report.clip_seconds = total_seconds / static_cast<double>(clips.size());
  report.hardware = cpu_model() + ", single-threaded";
  report.warmup = opts.warmup;
  report.threads = 1;

  const int rounds =
      (opts.min_reps + report.clip_count - 1) / report.clip_count;  // ceil
  report.reps = rounds * report.clip_count;

  for (const auto& method : methods) {
    auto run_clip = [&](std::size_t c) {
      MelSpectrogram x;
      x.domain = AmpDomain::Linear;
      x.frames = mel_frames[c];
      return estimate_prior(x, fb, method);
    };

    for (int i = 0; i < opts.warmup; ++i) run_clip(i % clips.size());

    std::vector<double> samples;
    samples.reserve(report.reps);
    std::vector<Mat> estimates(clips.size());
    for (int round = 0; round < rounds; ++round) {
      for (std::size_t c = 0; c < clips.size(); ++c) {
        const auto t0 = Clock::now();
        AmplitudeSpectrogram est = run_clip(c);
        const auto t1 = Clock::now();
        samples.push_back(std::chrono::duration<double>(t1 - t0).count());
        if (round == 0) estimates[c] = std::move(est.frames);
      }
    }

    MethodBench mb;
    mb.name = to_string(method.variant);
    mb.seconds_per_clip = median(samples);
    double sq_sum = 0.0;
    std::size_t cells = 0;
    for (std::size_t c = 0; c < clips.size(); ++c) {
      const Mat log_est = log_compress(estimates[c]);
      const double rmse = log_spectral_rmse(log_est, log_true[c]);
      mb.per_clip_las_rmse.push_back(rmse);
      sq_sum += rmse * rmse * static_cast<double>(log_est.size());
      cells += static_cast<std::size_t>(log_est.size());
    }
    mb.las_rmse = std::sqrt(sq_sum / static_cast<double>(cells));
    report.methods.push_back(std::move(mb));
  }
  return report;
}

std::string format_table1(const BenchReport& report) {
  auto fmt_time = [](double s) {
    char buf[32];
    if (s < 1e-3)
      std::snprintf(buf, sizeof(buf), "%.1fus", s * 1e6);
    else if (s < 1.0)
      std::snprintf(buf, sizeof(buf), "%.2fms", s * 1e3);
    else
      std::snprintf(buf, sizeof(buf), "%.2fs", s);
    return std::string(buf);
  };

  std::ostringstream os;
  os << "Method       ";
  for (const auto& m : report.methods) os << "| " << m.name << " ";
  os << "\n";
  os << "Time (per clip) ";
  for (const auto& m : report.methods) os << "| " << fmt_time(m.seconds_per_clip) << " ";
  os << "\n";
  os << "LAS-RMSE     ";
  for (const auto& m : report.methods) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", m.las_rmse);
    os << "| " << buf << " ";
  }
  os << "\n";
  os << "(" << report.clip_count << " clips of " << report.clip_seconds << " s, "
     << report.hardware << ")\n";
  return os.str();
}

}  // namespace freev
