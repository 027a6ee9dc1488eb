#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace CLI {
class App;
class Option;
}  // namespace CLI

namespace netab::cli {

struct SettingSpec {
  std::string key;       // snake_case; the flag is --key with '-' for '_'
  std::string fallback;  // default; empty means "not set"
  std::string help;
  bool is_path = false;  // made absolute on resolution
};

/// Reads `key = value` lines. '#' starts a comment; keys may use '-' or '_'.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

std::string flag_name(const std::string& key);

/// Flat string settings for one command, resolved as
/// defaults < config file < command-line flags.
class Settings {
 public:
  void declare(CLI::App& app, const std::vector<SettingSpec>& specs);
  void set_default(const std::string& key, std::string value);
  void resolve(const std::map<std::string, std::string>& file_values,
               const std::string& file_name);

  bool has(const std::string& key) const;
  const std::string& str(const std::string& key) const;
  double real(const std::string& key) const;
  std::uint64_t u64(const std::string& key) const;
  std::size_t size(const std::string& key) const { return static_cast<std::size_t>(u64(key)); }
  bool boolean(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<std::uint64_t> u64s(const std::string& key) const;
  std::vector<std::string> words(const std::string& key) const;

  const std::map<std::string, std::string>& resolved() const noexcept { return resolved_; }
  bool is_path(const std::string& key) const;

 private:
  std::vector<SettingSpec> specs_;
  std::map<std::string, std::string> from_flags_;
  std::map<std::string, CLI::Option*> options_;
  std::map<std::string, std::string> resolved_;
};

}  // namespace netab::cli
