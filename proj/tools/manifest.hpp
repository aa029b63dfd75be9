#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace mackboot::cli {

std::string sha256_file(const std::string& path);
std::string utc_now();

// Records one command invocation and the files it produced.
class RunManifest {
 public:
  RunManifest(std::string command, nlohmann::json config, std::uint64_t seed);

  void add_output(const std::string& path) { outputs_.push_back(path); }

  /// Digests every output, writes the manifest next to them and re-reads the
  /// outputs to confirm the digests. Throws IoFailure on any mismatch.
  void finish(const std::string& manifest_path);

 private:
  std::string command_;
  nlohmann::json config_;
  std::uint64_t seed_;
  std::string started_;
  std::vector<std::string> outputs_;
};

}  // namespace mackboot::cli
