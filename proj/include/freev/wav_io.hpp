#pragma once

#include <string>

#include "freev/spectrogram.hpp"

namespace freev {

enum class WavEncoding { Pcm16, Float32 };

// Mono WAV only. PCM16 and IEEE float32 are accepted; anything else throws.
Waveform read_wav(const std::string& path);
void write_wav(const std::string& path, const Waveform& w,
               WavEncoding enc = WavEncoding::Float32);

}  // namespace freev
