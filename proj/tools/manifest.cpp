#include "manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "mackboot/error.hpp"

#ifndef MACKBOOT_VERSION
#define MACKBOOT_VERSION "0.0.0"
#endif

namespace mackboot::cli {

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md.data(), &len);
  EVP_MD_CTX_free(ctx);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunManifest::RunManifest(std::string command, nlohmann::json config, std::uint64_t seed)
    : command_(std::move(command)), config_(std::move(config)), seed_(seed), started_(utc_now()) {}

void RunManifest::finish(const std::string& manifest_path) {
  nlohmann::json files = nlohmann::json::array();
  std::vector<std::string> digests;
  for (const auto& path : outputs_) {
    digests.push_back(sha256_file(path));
    files.push_back({{"path", std::filesystem::path(path).filename().string()},
                     {"bytes", std::filesystem::file_size(path)},
                     {"sha256", digests.back()}});
  }
  const nlohmann::json doc = {{"command", command_},       {"config", config_},
                              {"seed", seed_},             {"version", MACKBOOT_VERSION},
                              {"started", started_},       {"finished", utc_now()},
                              {"outputs", files}};
  {
    std::ofstream out(manifest_path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + manifest_path);
    out << doc.dump(2) << '\n';
    if (!out) throw Error(ErrorCode::IoFailure, "short write to " + manifest_path);
  }
  for (std::size_t i = 0; i < outputs_.size(); ++i) {
    if (sha256_file(outputs_[i]) != digests[i]) {
      throw Error(ErrorCode::IoFailure, "digest changed for " + outputs_[i]);
    }
  }
}

}  // namespace mackboot::cli
