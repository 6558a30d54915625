#pragma once

#include "config.hpp"
#include "manifest.hpp"

namespace qig::cli {

inline constexpr const char *kVersion = "qig 0.1.0";

struct RunOptions {
  std::string out_dir = ".";
  int threads = 1;
  std::uint64_t seed = 0;
};

/// Dispatches to the named experiment, writes its output files plus
/// manifest.json, and returns the manifest.
RunManifest run_experiment(const std::string &name, Config &config,
                           const RunOptions &options);

std::vector<std::string> experiment_names();

} // namespace qig::cli
