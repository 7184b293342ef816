#include "toml_config.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace freev::cli {

namespace {

std::string strip(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line_no, const std::string& msg) {
  throw std::runtime_error("config line " + std::to_string(line_no) + ": " + msg);
}

double to_number(const std::string& v, int line_no) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) fail(line_no, "trailing characters after number: " + v);
    return d;
  } catch (const std::invalid_argument&) {
    fail(line_no, "expected a number, got: " + v);
  } catch (const std::out_of_range&) {
    fail(line_no, "number out of range: " + v);
  }
}

bool to_bool(const std::string& v, int line_no) {
  if (v == "true") return true;
  if (v == "false") return false;
  fail(line_no, "expected true/false, got: " + v);
}

std::string to_string_value(const std::string& v, int line_no) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  fail(line_no, "expected a quoted string, got: " + v);
}

}  // namespace

AppConfig load_app_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config: " + path);

  AppConfig cfg;
  std::string section;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = strip(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "malformed table header");
      section = strip(line.substr(1, line.size() - 2));
      if (section != "spectral" && section != "mel" && section != "loss")
        fail(line_no, "unknown table [" + section + "]");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected key = value");
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (section.empty()) fail(line_no, "key outside of a table");

    if (section == "spectral") {
      if (key == "sample_rate") cfg.spectral.sample_rate = to_number(value, line_no);
      else if (key == "n_fft") cfg.spectral.n_fft = static_cast<int>(to_number(value, line_no));
      else if (key == "hop") cfg.spectral.hop = static_cast<int>(to_number(value, line_no));
      else if (key == "win_length")
        cfg.spectral.win_length = static_cast<int>(to_number(value, line_no));
      else if (key == "window") {
        if (to_string_value(value, line_no) != "hann") fail(line_no, "only \"hann\" is supported");
      } else if (key == "center") cfg.spectral.center = to_bool(value, line_no);
      else fail(line_no, "unknown key in [spectral]: " + key);
    } else if (section == "mel") {
      if (key == "n_mels") cfg.mel.n_mels = static_cast<int>(to_number(value, line_no));
      else if (key == "f_min") cfg.mel.f_min = to_number(value, line_no);
      else if (key == "f_max") cfg.mel.f_max = to_number(value, line_no);
      else if (key == "mel_scale") {
        const std::string s = to_string_value(value, line_no);
        if (s == "slaney") cfg.mel.scale = MelScale::Slaney;
        else if (s == "htk") cfg.mel.scale = MelScale::Htk;
        else fail(line_no, "mel_scale must be \"slaney\" or \"htk\"");
      } else if (key == "norm") {
        const std::string s = to_string_value(value, line_no);
        if (s == "slaney_area") cfg.mel.norm = MelNorm::SlaneyArea;
        else if (s == "none") cfg.mel.norm = MelNorm::None;
        else fail(line_no, "norm must be \"slaney_area\" or \"none\"");
      } else fail(line_no, "unknown key in [mel]: " + key);
    } else {  // loss
      if (key == "lambda_a") cfg.loss.lambda_a = to_number(value, line_no);
      else if (key == "lambda_p") cfg.loss.lambda_p = to_number(value, line_no);
      else if (key == "lambda_s") cfg.loss.lambda_s = to_number(value, line_no);
      else if (key == "lambda_w") cfg.loss.lambda_w = to_number(value, line_no);
      else fail(line_no, "unknown key in [loss]: " + key);
    }
  }
  cfg.spectral.validate();
  cfg.mel.validate(cfg.spectral.sample_rate);
  return cfg;
}

}  // namespace freev::cli
