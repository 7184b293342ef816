#pragma once

#include <string>

#include "freev/config.hpp"
#include "freev/losses.hpp"

namespace freev::cli {

struct AppConfig {
  SpectralConfig spectral;
  MelConfig mel;
  LossWeights loss;
};

// Strict TOML-subset reader for the three config tables ([spectral], [mel],
// [loss]): scalar key = value lines, # comments, quoted strings, booleans.
// Unknown tables or keys are hard errors so a typo cannot silently fall back
// to defaults.
AppConfig load_app_config(const std::string& path);

}  // namespace freev::cli
