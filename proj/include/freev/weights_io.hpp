#pragma once

#include <string>

#include "freev/net.hpp"

namespace freev {

// FVW1 weight container: magic "FVW1", u32 manifest length, UTF-8 manifest of
// key=value lines (hyperparameters plus one tensor=<name> line per tensor in
// storage order), then the named FVT1 tensors in exactly that order.
// Loaders reject unknown format versions.
void save_weights(const std::string& path, const GeneratorWeights& w);
GeneratorWeights load_weights(const std::string& path);

}  // namespace freev
