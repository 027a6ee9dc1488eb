#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace netab::cli {

struct InputDigest {
  std::string setting;  // which setting named the file
  std::string path;
  std::string fnv1a64;  // 16 hex digits
  std::uintmax_t bytes = 0;
};

/// Everything needed to re-run a command: the fully resolved settings plus
/// digests of the files it read.
struct RunManifest {
  std::string tool = "netab";
  std::string version;
  std::string command;
  std::string started_at;  // UTC, ISO 8601
  std::string seed;
  std::map<std::string, std::string> settings;
  std::vector<InputDigest> inputs;

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
};

std::string hex64(std::uint64_t v);
InputDigest digest_file(const std::string& setting, const std::filesystem::path& path);
std::string utc_timestamp();

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& path);

}  // namespace netab::cli
