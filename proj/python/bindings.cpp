#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "freev/dsp.hpp"
#include "freev/fixtures.hpp"
#include "freev/losses.hpp"
#include "freev/melbank.hpp"
#include "freev/metrics.hpp"
#include "freev/net.hpp"
#include "freev/phase.hpp"
#include "freev/prior.hpp"
#include "freev/wav_io.hpp"
#include "freev/weights_io.hpp"

namespace py = pybind11;
using namespace freev;

namespace {

Waveform make_waveform(const std::vector<double>& samples, double sample_rate) {
  Waveform w;
  w.samples = samples;
  w.sample_rate = sample_rate;
  return w;
}

PriorMethod method_of(const std::string& name) {
  return {prior_variant_from_string(name), 500, 1e-8};
}

}  // namespace

PYBIND11_MODULE(_freev, m) {
  m.doc() = "FreeV vocoder signal processing: STFT, mel pseudo-inverse priors, "
            "phase ops, losses, metrics and forward-only inference";

  py::class_<SpectralConfig>(m, "SpectralConfig")
      .def(py::init<>())
      .def_readwrite("sample_rate", &SpectralConfig::sample_rate)
      .def_readwrite("n_fft", &SpectralConfig::n_fft)
      .def_readwrite("hop", &SpectralConfig::hop)
      .def_readwrite("win_length", &SpectralConfig::win_length)
      .def_readwrite("center", &SpectralConfig::center)
      .def_property_readonly("n_freq", &SpectralConfig::n_freq);

  py::class_<MelConfig>(m, "MelConfig")
      .def(py::init<>())
      .def_readwrite("n_mels", &MelConfig::n_mels)
      .def_readwrite("f_min", &MelConfig::f_min)
      .def_readwrite("f_max", &MelConfig::f_max);

  py::class_<MelFilterbank>(m, "MelFilterbank")
      .def_readonly("m", &MelFilterbank::m)
      .def_readonly("m_pinv", &MelFilterbank::m_pinv)
      .def_property_readonly("n_mels", &MelFilterbank::n_mels)
      .def_property_readonly("n_freq", &MelFilterbank::n_freq);

  m.def("build_filterbank",
        [](const SpectralConfig& sc, const MelConfig& mc) { return build_filterbank(sc, mc); },
        py::arg("spectral") = SpectralConfig{}, py::arg("mel") = MelConfig{});

  m.def("stft",
        [](const std::vector<double>& samples, const SpectralConfig& cfg) {
          return CMat(stft(make_waveform(samples, cfg.sample_rate), cfg).frames);
        },
        py::arg("samples"), py::arg("config") = SpectralConfig{},
        "complex spectrogram, frames x bins");

  m.def("istft",
        [](const CMat& frames, const SpectralConfig& cfg) {
          ComplexSpectrogram s;
          s.frames = frames;
          s.config = cfg;
          return istft(s).samples;
        },
        py::arg("frames"), py::arg("config") = SpectralConfig{});

  m.def("magnitude",
        [](const std::vector<double>& samples, const SpectralConfig& cfg) {
          return Mat(polar_split(stft(make_waveform(samples, cfg.sample_rate), cfg)).first.frames);
        },
        py::arg("samples"), py::arg("config") = SpectralConfig{});

  m.def("apply_mel",
        [](const Mat& amp, const MelFilterbank& fb) {
          AmplitudeSpectrogram a{amp, AmpDomain::Linear, fb.spectral_config};
          return Mat(apply_mel(a, fb).frames);
        },
        py::arg("amplitude"), py::arg("filterbank"));

  m.def("estimate_prior",
        [](const Mat& mel, const MelFilterbank& fb, const std::string& method) {
          MelSpectrogram x{mel, AmpDomain::Linear};
          return Mat(estimate_prior(x, fb, method_of(method)).frames);
        },
        py::arg("mel"), py::arg("filterbank"), py::arg("method") = "pi-abs",
        "method: nnls | ls | pi | pi-abs; output floored at 1e-5");

  m.def("log_compress", [](const Mat& x) { return Mat(log_compress(x)); });
  m.def("log_expand", [](const Mat& x) { return Mat(log_expand(x)); });

  m.def("parallel_phase",
        [](const Mat& r, const Mat& i) {
          return Mat(parallel_phase(PhaseComponents{r, i}, SpectralConfig{}).frames);
        },
        py::arg("r"), py::arg("i"));
  m.def("anti_wrap", [](const Mat& x) { return Mat(anti_wrap(x)); });

  m.def("griffin_lim",
        [](const Mat& amp, int iters, const SpectralConfig& cfg) {
          AmplitudeSpectrogram a{amp, AmpDomain::Linear, cfg};
          return Mat(griffin_lim(a, iters).frames);
        },
        py::arg("amplitude"), py::arg("iters") = 32, py::arg("config") = SpectralConfig{});

  m.def("evaluate_losses",
        [](const std::vector<double>& pred, const std::vector<double>& ref,
           const MelFilterbank& fb) {
          const LossBreakdown b =
              evaluate_losses(make_waveform(pred, fb.spectral_config.sample_rate),
                              make_waveform(ref, fb.spectral_config.sample_rate), fb);
          py::dict d;
          d["amplitude"] = b.amplitude;
          d["inst_phase"] = b.inst_phase;
          d["group_delay"] = b.group_delay;
          d["phase_time_diff"] = b.phase_time_diff;
          d["stft_consistency"] = b.stft_consistency;
          d["stft_l1"] = b.stft_l1;
          d["mel_l1"] = b.mel_l1;
          d["total"] = b.total;
          return d;
        },
        py::arg("pred"), py::arg("ref"), py::arg("filterbank"));

  m.def("evaluate_metrics",
        [](const std::vector<double>& ref, const std::vector<double>& deg,
           const MelFilterbank& fb) {
          const MetricReport r =
              evaluate_metrics(make_waveform(ref, fb.spectral_config.sample_rate),
                               make_waveform(deg, fb.spectral_config.sample_rate), fb);
          py::dict d;
          d["mcd"] = r.mcd;
          d["las_rmse"] = r.las_rmse;
          d["vuv_f1"] = r.vuv_f1;
          d["periodicity_err"] = r.periodicity_err;
          d["f0_rmse"] = r.f0_rmse ? py::object(py::float_(*r.f0_rmse)) : py::object(py::none());
          d["stoi"] = r.stoi;
          return d;
        },
        py::arg("ref"), py::arg("deg"), py::arg("filterbank"));

  m.def("stoi",
        [](const std::vector<double>& ref, const std::vector<double>& deg, double sr) {
          return stoi(make_waveform(ref, sr), make_waveform(deg, sr));
        },
        py::arg("ref"), py::arg("deg"), py::arg("sample_rate") = 22050.0);

  m.def("track_pitch",
        [](const std::vector<double>& samples, double sr) {
          const PitchTrack t = track_pitch(make_waveform(samples, sr));
          py::dict d;
          d["f0"] = t.f0;
          d["voiced"] = t.voiced;
          d["periodicity"] = t.periodicity;
          d["hop"] = t.hop;
          return d;
        },
        py::arg("samples"), py::arg("sample_rate") = 22050.0);

  m.def("make_fixture",
        [](const std::string& kind, double duration, double f0, std::uint64_t seed,
           double sample_rate) {
          FixtureSpec spec;
          spec.kind = fixture_kind_from_string(kind);
          spec.duration = duration;
          spec.f0 = f0;
          spec.seed = seed;
          spec.sample_rate = sample_rate;
          return make_fixture(spec).samples;
        },
        py::arg("kind"), py::arg("duration") = 2.0, py::arg("f0") = 220.0, py::arg("seed") = 0,
        py::arg("sample_rate") = 22050.0);

  py::class_<GeneratorWeights>(m, "GeneratorWeights")
      .def_property_readonly("parameter_count", &GeneratorWeights::parameter_count);

  m.def("gen_weights",
        [](std::uint64_t seed, int psp_blocks, int asp_blocks, int hidden) {
          NetManifest man;
          man.psp_blocks = psp_blocks;
          man.asp_blocks = asp_blocks;
          man.hidden = hidden;
          return gen_weights(seed, man);
        },
        py::arg("seed") = 0, py::arg("psp_blocks") = 8, py::arg("asp_blocks") = 1,
        py::arg("hidden") = 1536);
  m.def("save_weights", &save_weights, py::arg("path"), py::arg("weights"));
  m.def("load_weights", &load_weights, py::arg("path"));

  m.def("vocode",
        [](const Mat& mel, const MelFilterbank& fb, const GeneratorWeights& w) {
          MelSpectrogram x{mel, AmpDomain::Linear};
          const VocodeResult r = vocode(x, fb, w);
          py::dict d;
          d["waveform"] = r.waveform.samples;
          d["pred_log_amp"] = r.pred_log_amp.frames;
          d["pred_phase"] = r.pred_phase.frames;
          d["prior_log_amp"] = r.prior_log_amp.frames;
          return d;
        },
        py::arg("mel"), py::arg("filterbank"), py::arg("weights"));

  m.def("read_wav", [](const std::string& path) {
    const Waveform w = read_wav(path);
    return py::make_tuple(w.samples, w.sample_rate);
  });
  m.def("write_wav",
        [](const std::string& path, const std::vector<double>& samples, double sr,
           const std::string& encoding) {
          write_wav(path, make_waveform(samples, sr),
                    encoding == "pcm16" ? WavEncoding::Pcm16 : WavEncoding::Float32);
        },
        py::arg("path"), py::arg("samples"), py::arg("sample_rate") = 22050.0,
        py::arg("encoding") = "float32");
}
