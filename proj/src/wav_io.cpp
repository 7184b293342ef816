#include "freev/wav_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace freev {

namespace {

template <typename T>
T read_le(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("WAV: truncated file");
  return v;
}

template <typename T>
void write_le(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

}  // namespace

Waveform read_wav(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("WAV: cannot open: " + path);

  char tag[4];
  is.read(tag, 4);
  if (!is || std::memcmp(tag, "RIFF", 4) != 0) throw std::runtime_error("WAV: not a RIFF file");
  read_le<std::uint32_t>(is);  // riff size
  is.read(tag, 4);
  if (!is || std::memcmp(tag, "WAVE", 4) != 0) throw std::runtime_error("WAV: not a WAVE file");

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::vector<char> payload;

  while (is.read(tag, 4)) {
    const auto chunk_size = read_le<std::uint32_t>(is);
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      format = read_le<std::uint16_t>(is);
      channels = read_le<std::uint16_t>(is);
      rate = read_le<std::uint32_t>(is);
      read_le<std::uint32_t>(is);  // byte rate
      read_le<std::uint16_t>(is);  // block align
      bits = read_le<std::uint16_t>(is);
      if (chunk_size > 16) is.ignore(chunk_size - 16);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      payload.resize(chunk_size);
      is.read(payload.data(), chunk_size);
      if (!is) throw std::runtime_error("WAV: truncated data chunk");
      break;
    } else {
      is.ignore(chunk_size + (chunk_size & 1));
    }
  }
  if (!have_fmt || payload.empty()) throw std::runtime_error("WAV: missing fmt or data chunk");
  if (channels != 1) throw std::runtime_error("WAV: only mono files are supported");

  Waveform out;
  out.sample_rate = rate;
  if (format == 1 && bits == 16) {
    const std::size_t n = payload.size() / 2;
    out.samples.resize(n);
    const auto* p = reinterpret_cast<const std::int16_t*>(payload.data());
    for (std::size_t i = 0; i < n; ++i) out.samples[i] = p[i] / 32768.0;
  } else if (format == 3 && bits == 32) {
    const std::size_t n = payload.size() / 4;
    out.samples.resize(n);
    const auto* p = reinterpret_cast<const float*>(payload.data());
    for (std::size_t i = 0; i < n; ++i) out.samples[i] = p[i];
  } else {
    throw std::runtime_error("WAV: unsupported encoding (need PCM16 or float32)");
  }
  return out;
}

void write_wav(const std::string& path, const Waveform& w, WavEncoding enc) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("WAV: cannot open for writing: " + path);

  const std::uint32_t n = static_cast<std::uint32_t>(w.samples.size());
  const std::uint16_t bytes_per = enc == WavEncoding::Pcm16 ? 2 : 4;
  const std::uint32_t data_size = n * bytes_per;
  const std::uint32_t rate = static_cast<std::uint32_t>(w.sample_rate);

  os.write("RIFF", 4);
  write_le<std::uint32_t>(os, 36 + data_size);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  write_le<std::uint32_t>(os, 16);
  write_le<std::uint16_t>(os, enc == WavEncoding::Pcm16 ? 1 : 3);
  write_le<std::uint16_t>(os, 1);
  write_le<std::uint32_t>(os, rate);
  write_le<std::uint32_t>(os, rate * bytes_per);
  write_le<std::uint16_t>(os, bytes_per);
  write_le<std::uint16_t>(os, static_cast<std::uint16_t>(bytes_per * 8));
  os.write("data", 4);
  write_le<std::uint32_t>(os, data_size);

  if (enc == WavEncoding::Pcm16) {
    for (double v : w.samples) {
      const double clamped = std::clamp(v, -1.0, 1.0);
      write_le<std::int16_t>(os, static_cast<std::int16_t>(std::lround(clamped * 32767.0)));
    }
  } else {
    for (double v : w.samples) write_le<float>(os, static_cast<float>(v));
  }
  if (!os) throw std::runtime_error("WAV: write failed");
}

}  // namespace freev
