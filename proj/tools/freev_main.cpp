#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>
#include <vector>

#include <json.hpp>

#include "freev/dsp.hpp"
#include "freev/fixtures.hpp"
#include "freev/losses.hpp"
#include "freev/melbank.hpp"
#include "freev/metrics.hpp"
#include "freev/net.hpp"
#include "freev/prior.hpp"
#include "freev/tensor_io.hpp"
#include "freev/wav_io.hpp"
#include "freev/weights_io.hpp"
#include "svg_plot.hpp"
#include "toml_config.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace freev;

namespace {

struct CommonOpts {
  std::string config_path;
};

cli::AppConfig resolve_config(const CommonOpts& common) {
  if (common.config_path.empty()) return {};
  return cli::load_app_config(common.config_path);
}

int env_threads() {
  const char* v = std::getenv("FREEV_THREADS");
  if (!v) return static_cast<int>(std::thread::hardware_concurrency());
  const int n = std::atoi(v);
  return n > 0 ? n : 1;
}

std::vector<fs::path> list_wavs(const std::string& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".wav") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

json report_to_json(const BenchReport& r) {
  json j;
  j["clip_count"] = r.clip_count;
  j["clip_seconds"] = r.clip_seconds;
  j["hardware"] = r.hardware;
  j["threads"] = r.threads;
  j["reps"] = r.reps;
  j["warmup"] = r.warmup;
  j["methods"] = json::array();
  for (const auto& m : r.methods) {
    json jm;
    jm["name"] = m.name;
    jm["seconds_per_clip"] = m.seconds_per_clip;
    jm["las_rmse"] = m.las_rmse;
    jm["per_clip_las_rmse"] = m.per_clip_las_rmse;
    j["methods"].push_back(jm);
  }
  return j;
}

json losses_to_json(const LossBreakdown& b) {
  json j;
  j["amplitude"] = b.amplitude;
  j["inst_phase"] = b.inst_phase;
  j["group_delay"] = b.group_delay;
  j["phase_time_diff"] = b.phase_time_diff;
  j["stft_consistency"] = b.stft_consistency;
  j["stft_l1"] = b.stft_l1;
  j["mel_l1"] = b.mel_l1;
  j["total"] = b.total;
  return j;
}

json metrics_to_json(const MetricReport& m) {
  json j;
  j["mcd"] = m.mcd;
  j["las_rmse"] = m.las_rmse;
  j["vuv_f1"] = m.vuv_f1;
  j["periodicity_err"] = m.periodicity_err;
  if (m.f0_rmse)
    j["f0_rmse"] = *m.f0_rmse;
  else
    j["f0_rmse"] = nullptr;
  j["f0_rmse_unit"] = "Hz";
  j["stoi"] = m.stoi;
  return j;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << content;
}

// ---- subcommand bodies ----

int cmd_features(const CommonOpts& common, const std::string& in_path,
                 const std::string& out_prefix) {
  const cli::AppConfig cfg = resolve_config(common);
  const Waveform w = read_wav(in_path);
  if (w.sample_rate != cfg.spectral.sample_rate)
    throw std::runtime_error("sample rate mismatch: file has " +
                             std::to_string(static_cast<int>(w.sample_rate)) + " Hz, config wants " +
                             std::to_string(static_cast<int>(cfg.spectral.sample_rate)) +
                             " Hz (no implicit resampling)");
  const MelFilterbank fb = build_filterbank(cfg.spectral, cfg.mel);
  const auto [amp, phase] = polar_split(stft(w, cfg.spectral));
  const AmplitudeSpectrogram logamp = log_compress(amp);
  const MelSpectrogram mel = apply_mel(amp, fb);

  write_fvt1(out_prefix + ".amp.fvt", tensor_from_matrix(amp.frames));
  write_fvt1(out_prefix + ".logamp.fvt", tensor_from_matrix(logamp.frames));
  write_fvt1(out_prefix + ".mel.fvt", tensor_from_matrix(mel.frames));
  std::cout << "amp:    [" << amp.frames.rows() << ", " << amp.frames.cols() << "]\n"
            << "logamp: [" << logamp.frames.rows() << ", " << logamp.frames.cols() << "]\n"
            << "mel:    [" << mel.frames.rows() << ", " << mel.frames.cols() << "]\n";
  return 0;
}

int cmd_bench_prior(const CommonOpts& common, const std::string& clips_dir, int fixtures,
                    double seconds, std::uint64_t seed, const std::string& methods_csv,
                    int reps, int warmup, const std::string& out_path) {
  const cli::AppConfig cfg = resolve_config(common);
  const MelFilterbank fb = build_filterbank(cfg.spectral, cfg.mel);

  std::vector<Waveform> clips;
  if (!clips_dir.empty()) {
    for (const auto& p : list_wavs(clips_dir)) {
      Waveform w = read_wav(p.string());
      if (w.sample_rate != cfg.spectral.sample_rate)
        throw std::runtime_error("clip " + p.string() + " is not at the configured sample rate");
      clips.push_back(std::move(w));
    }
    if (clips.empty()) throw std::runtime_error("no .wav files in " + clips_dir);
  } else {
    clips = make_bench_clips(fixtures, seconds, cfg.spectral.sample_rate, seed);
  }

  std::vector<PriorMethod> methods;
  std::stringstream ss(methods_csv);
  std::string name;
  while (std::getline(ss, name, ',')) methods.push_back({prior_variant_from_string(name), 500, 1e-8});

  BenchOptions opts;
  opts.min_reps = reps;
  opts.warmup = warmup;
  const BenchReport report = bench_priors(clips, fb, methods, opts);

  std::cout << format_table1(report);
  if (!out_path.empty()) {
    write_text_file(out_path, report_to_json(report).dump(2) + "\n");
    std::cout << "report written to " << out_path << "\n";
  }
  return 0;
}

int cmd_gen_weights(const std::string& out_path, std::uint64_t seed, int psp_blocks,
                    int asp_blocks, int hidden, int psp_dim, int kernel, bool report_params) {
  NetManifest m;
  m.psp_blocks = psp_blocks;
  m.asp_blocks = asp_blocks;
  m.hidden = hidden;
  m.psp_dim = psp_dim;
  m.kernel = kernel;
  const GeneratorWeights w = gen_weights(seed, m);
  save_weights(out_path, w);
  std::cout << "wrote " << out_path << " (" << w.parameter_count() << " parameters)\n";
  if (report_params) {
    const ParamReport r = param_report(w);
    json j;
    j["psp_parameters"] = r.psp_total;
    j["asp_parameters"] = r.asp_total;
    j["total_parameters"] = r.total;
    j["apnet2_shaped_total_parameters"] = r.apnet2_shaped_total;
    std::cout << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_vocode(const CommonOpts& common, const std::string& weights_path,
               const std::string& mel_path, const std::string& out_path, int rtf_runs) {
  const cli::AppConfig cfg = resolve_config(common);
  const MelFilterbank fb = build_filterbank(cfg.spectral, cfg.mel);
  const GeneratorWeights w = load_weights(weights_path);
  MelSpectrogram mel;
  mel.domain = AmpDomain::Linear;
  mel.frames = matrix_from_tensor(read_fvt1(mel_path));
  if (mel.frames.cols() != w.manifest.n_mels)
    throw std::runtime_error("mel tensor has " + std::to_string(mel.frames.cols()) +
                             " bands, weights expect " + std::to_string(w.manifest.n_mels));

  const VocodeResult res = vocode(mel, fb, w);
  write_wav(out_path, res.waveform, WavEncoding::Float32);
  std::cout << "wrote " << out_path << " (" << res.waveform.samples.size() << " samples, "
            << res.waveform.seconds() << " s)\n";

  if (rtf_runs > 0) {
    const double rtf = rtf_measure([&] { vocode(mel, fb, w); }, res.waveform.seconds(),
                                   std::max(rtf_runs, 5), 1);
    json j;
    j["rtf_cpu_single_thread"] = rtf;
    j["runs"] = std::max(rtf_runs, 5);
    std::cout << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_losses(const CommonOpts& common, const std::string& pred_path,
               const std::string& ref_path) {
  const cli::AppConfig cfg = resolve_config(common);
  const MelFilterbank fb = build_filterbank(cfg.spectral, cfg.mel);
  const Waveform pred = read_wav(pred_path);
  const Waveform ref = read_wav(ref_path);
  if (pred.sample_rate != cfg.spectral.sample_rate || ref.sample_rate != cfg.spectral.sample_rate)
    throw std::runtime_error("inputs must be at the configured sample rate (no resampling)");
  const LossBreakdown b = evaluate_losses(pred, ref, fb, cfg.loss);
  std::cout << losses_to_json(b).dump(2) << "\n";
  return 0;
}

int cmd_eval(const CommonOpts& common, const std::string& ref_dir, const std::string& deg_dir,
             const std::string& out_path) {
  const cli::AppConfig cfg = resolve_config(common);
  const MelFilterbank fb = build_filterbank(cfg.spectral, cfg.mel);

  const auto refs = list_wavs(ref_dir);
  if (refs.empty()) throw std::runtime_error("no .wav files in " + ref_dir);
  std::vector<std::pair<fs::path, fs::path>> pairs;
  for (const auto& r : refs) {
    const fs::path d = fs::path(deg_dir) / r.filename();
    if (!fs::exists(d)) throw std::runtime_error("missing counterpart: " + d.string());
    pairs.emplace_back(r, d);
  }

  std::vector<MetricReport> results(pairs.size());
  const int threads = std::max(1, std::min<int>(env_threads(), static_cast<int>(pairs.size())));
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  std::vector<std::string> errors(pairs.size());
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < pairs.size(); i = next.fetch_add(1)) {
        try {
          const Waveform ref = read_wav(pairs[i].first.string());
          const Waveform deg = read_wav(pairs[i].second.string());
          results[i] = evaluate_metrics(ref, deg, fb);
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (!errors[i].empty())
      throw std::runtime_error(pairs[i].first.filename().string() + ": " + errors[i]);

  json j;
  j["pairs"] = json::array();
  double mcd_sum = 0, las_sum = 0, f1_sum = 0, per_sum = 0, stoi_sum = 0, f0_sum = 0;
  int f0_count = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    json jp = metrics_to_json(results[i]);
    jp["file"] = pairs[i].first.filename().string();
    j["pairs"].push_back(jp);
    mcd_sum += results[i].mcd;
    las_sum += results[i].las_rmse;
    f1_sum += results[i].vuv_f1;
    per_sum += results[i].periodicity_err;
    stoi_sum += results[i].stoi;
    if (results[i].f0_rmse) {
      f0_sum += *results[i].f0_rmse;
      ++f0_count;
    }
  }
  const double n = static_cast<double>(pairs.size());
  json agg;
  agg["mcd"] = mcd_sum / n;
  agg["las_rmse"] = las_sum / n;
  agg["vuv_f1"] = f1_sum / n;
  agg["periodicity_err"] = per_sum / n;
  agg["f0_rmse"] = f0_count ? json(f0_sum / f0_count) : json(nullptr);
  agg["stoi"] = stoi_sum / n;
  j["aggregate"] = agg;
  j["threads"] = threads;

  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-10s %-12s %-10s %-14s %-10s %-8s", "MCD(v)",
                "LAS-RMSE(v)", "V/UV F1(^)", "Periodicity(v)", "F0-RMSE(v)", "STOI(^)");
  std::cout << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%-10.3f %-12.4f %-10.4f %-14.4f %-10.2f %-8.4f",
                mcd_sum / n, las_sum / n, f1_sum / n, per_sum / n,
                f0_count ? f0_sum / f0_count : 0.0, stoi_sum / n);
  std::cout << buf << "\n";

  if (!out_path.empty()) {
    write_text_file(out_path, j.dump(2) + "\n");
    std::cout << "report written to " << out_path << "\n";
  }
  return 0;
}

int cmd_plot(const std::string& report_path, const std::string& compare_path,
             const std::string& out_path) {
  std::ifstream is(report_path);
  if (!is) throw std::runtime_error("cannot open report: " + report_path);
  json j = json::parse(is);
  if (!j.contains("methods") || j["methods"].empty())
    throw std::runtime_error("report has no method series");

  std::vector<std::string> categories;
  cli::BarSeries times{"time per clip (s)", {}};
  cli::BarSeries rmse{"LAS-RMSE", {}};
  for (const auto& m : j["methods"]) {
    categories.push_back(m["name"].get<std::string>());
    times.values.push_back(m["seconds_per_clip"].get<double>());
    rmse.values.push_back(std::max(m["las_rmse"].get<double>(), 1e-6));
  }
  std::vector<cli::BarSeries> series{times, rmse};

  if (!compare_path.empty()) {
    std::ifstream is2(compare_path);
    if (!is2) throw std::runtime_error("cannot open report: " + compare_path);
    json j2 = json::parse(is2);
    cli::BarSeries times2{"time per clip (s), compare", {}};
    for (const auto& name : categories) {
      bool found = false;
      for (const auto& m : j2["methods"]) {
        if (m["name"].get<std::string>() == name) {
          times2.values.push_back(m["seconds_per_clip"].get<double>());
          found = true;
        }
      }
      if (!found) throw std::runtime_error("compare report lacks method " + name);
    }
    series.push_back(times2);
  }

  write_text_file(out_path,
                  cli::render_bar_chart_svg("prior computation benchmark", categories, series,
                                            "log scale"));
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FreeV vocoder signal-processing toolkit"};
  app.require_subcommand(1);
  CommonOpts common;

  // features
  auto* features = app.add_subcommand("features", "extract amplitude/log-amplitude/mel tensors");
  std::string feat_in, feat_prefix;
  features->add_option("--in", feat_in, "input mono WAV at the configured rate")->required();
  features->add_option("--out-prefix", feat_prefix, "output path prefix")->required();
  features->add_option("--config", common.config_path, "TOML config");

  // bench-prior
  auto* bench = app.add_subcommand("bench-prior", "time and score the prior estimators");
  std::string bench_clips, bench_methods = "nnls,ls,pi,pi-abs", bench_out;
  int bench_fixtures = 100, bench_reps = 10, bench_warmup = 2;
  double bench_seconds = 2.0;
  std::uint64_t bench_seed = 0;
  bench->add_option("--clips", bench_clips, "directory of WAV clips");
  bench->add_option("--fixtures", bench_fixtures, "synthesize N harmonic-voice clips instead");
  bench->add_option("--seconds", bench_seconds, "fixture duration");
  bench->add_option("--seed", bench_seed, "fixture seed");
  bench->add_option("--methods", bench_methods, "comma list: nnls,ls,pi,pi-abs");
  bench->add_option("--reps", bench_reps, "minimum timed invocations per method");
  bench->add_option("--warmup", bench_warmup, "untimed warm-up invocations");
  bench->add_option("--out", bench_out, "JSON report path");
  bench->add_option("--config", common.config_path, "TOML config");

  // gen-weights
  auto* genw = app.add_subcommand("gen-weights", "write deterministic pseudo-random weights");
  std::string genw_out;
  std::uint64_t genw_seed = 0;
  int genw_psp_blocks = 8, genw_asp_blocks = 1, genw_hidden = 1536, genw_dim = 512,
      genw_kernel = 7;
  bool genw_report = false;
  genw->add_option("--seed", genw_seed, "RNG seed")->required();
  genw->add_option("--out", genw_out, "output .fvw path")->required();
  genw->add_option("--psp-blocks", genw_psp_blocks, "PSP block count");
  genw->add_option("--asp-blocks", genw_asp_blocks, "ASP block count");
  genw->add_option("--hidden", genw_hidden, "block hidden dim");
  genw->add_option("--psp-dim", genw_dim, "PSP width");
  genw->add_option("--kernel", genw_kernel, "conv kernel width (odd)");
  genw->add_flag("--report-params", genw_report, "print the parameter-count report");

  // vocode
  auto* voc = app.add_subcommand("vocode", "mel tensor -> waveform");
  std::string voc_weights, voc_mel, voc_out;
  int voc_rtf = 0;
  voc->add_option("--weights", voc_weights, ".fvw weight container")->required();
  voc->add_option("--mel", voc_mel, "input mel FVT1 tensor (T x n_mels, linear)")->required();
  voc->add_option("--out", voc_out, "output WAV path")->required();
  voc->add_option("--rtf", voc_rtf, "also measure RTF over this many runs (>= 5)");
  voc->add_option("--config", common.config_path, "TOML config");

  // losses
  auto* loss = app.add_subcommand("losses", "generator loss breakdown for a waveform pair");
  std::string loss_pred, loss_ref;
  loss->add_option("--pred", loss_pred, "predicted WAV")->required();
  loss->add_option("--ref", loss_ref, "reference WAV")->required();
  loss->add_option("--config", common.config_path, "TOML config");

  // eval
  auto* eval = app.add_subcommand("eval", "objective metric suite over paired directories");
  std::string eval_ref, eval_deg, eval_out;
  eval->add_option("--ref", eval_ref, "reference WAV directory")->required();
  eval->add_option("--deg", eval_deg, "degraded/synthesized WAV directory")->required();
  eval->add_option("--out", eval_out, "JSON report path");
  eval->add_option("--config", common.config_path, "TOML config");

  // plot
  auto* plot = app.add_subcommand("plot", "render a benchmark report as an SVG bar chart");
  std::string plot_report, plot_compare, plot_out;
  plot->add_option("--report", plot_report, "bench-prior JSON report")->required();
  plot->add_option("--compare", plot_compare, "second report to overlay");
  plot->add_option("--out", plot_out, "output SVG path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (features->parsed()) return cmd_features(common, feat_in, feat_prefix);
    if (bench->parsed())
      return cmd_bench_prior(common, bench_clips, bench_fixtures, bench_seconds, bench_seed,
                             bench_methods, bench_reps, bench_warmup, bench_out);
    if (genw->parsed())
      return cmd_gen_weights(genw_out, genw_seed, genw_psp_blocks, genw_asp_blocks, genw_hidden,
                             genw_dim, genw_kernel, genw_report);
    if (voc->parsed()) return cmd_vocode(common, voc_weights, voc_mel, voc_out, voc_rtf);
    if (loss->parsed()) return cmd_losses(common, loss_pred, loss_ref);
    if (eval->parsed()) return cmd_eval(common, eval_ref, eval_deg, eval_out);
    if (plot->parsed()) return cmd_plot(plot_report, plot_compare, plot_out);
  } catch (const std::exception& e) {
    std::cerr << "freev: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
