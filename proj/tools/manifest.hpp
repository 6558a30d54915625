#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qig::cli {

/// SHA-256 of a byte string, lowercase hex.
std::string sha256_hex(const std::string &bytes);

struct OutputRecord {
  std::string file;   // basename within the output directory
  std::string sha256; // content digest
};

struct RunManifest {
  std::string experiment;
  std::string config_echo;
  std::string version;
  double duration_seconds = 0.0;
  std::uint64_t seed = 0;
  int threads = 1;
  std::vector<OutputRecord> outputs;
};

/// Writes `manifest.json` into `out_dir`.
void write_manifest(const RunManifest &manifest, const std::string &out_dir);

/// Writes bytes to out_dir/name (LF endings as given) and records the digest.
void emit_file(RunManifest &manifest, const std::string &out_dir,
               const std::string &name, const std::string &bytes);

} // namespace qig::cli
