#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "freev/spectrogram.hpp"

namespace freev {

enum class FixtureKind { Sine, HarmonicVoice, Noise, Chirp, Silence };

// Deterministic synthetic test signals; (kind, params, seed) fully determine
// the samples. HarmonicVoice is the stand-in for speech clips: a vibrato
// harmonic comb shaped by formant-like resonators, breath noise filtered
// through the same resonators, syllabic amplitude modulation and a low room
// noise floor.
struct FixtureSpec {
  FixtureKind kind = FixtureKind::HarmonicVoice;
  double duration = 2.0;      // seconds
  double f0 = 220.0;          // Hz, where applicable
  std::uint64_t seed = 0;
  double sample_rate = 22050.0;
};

Waveform make_fixture(const FixtureSpec& spec);

FixtureKind fixture_kind_from_string(const std::string& name);
std::string to_string(FixtureKind kind);

// The Table-1 style benchmark set: `count` HarmonicVoice clips with f0 spread
// over 170..260 Hz and per-clip seeds derived from seed0.
std::vector<Waveform> make_bench_clips(int count, double duration, double sample_rate,
                                       std::uint64_t seed0);

}  // namespace freev
