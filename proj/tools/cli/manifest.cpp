#include "cli/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "netab/checkpoint.hpp"
#include "netab/errors.hpp"

namespace netab::cli {

using nlohmann::json;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

InputDigest digest_file(const std::string& setting, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string bytes = ss.str();
  return InputDigest{setting, path.string(), hex64(fnv1a64(bytes)), bytes.size()};
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string RunManifest::to_json() const {
  json in = json::array();
  for (const auto& d : inputs) {
    in.push_back({{"setting", d.setting}, {"path", d.path}, {"fnv1a64", d.fnv1a64},
                  {"bytes", d.bytes}});
  }
  json j{{"tool", tool},     {"version", version}, {"command", command},
         {"started_at", started_at}, {"seed", seed}, {"settings", settings},
         {"inputs", in}};
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    RunManifest m;
    m.tool = j.at("tool").get<std::string>();
    m.version = j.at("version").get<std::string>();
    m.command = j.at("command").get<std::string>();
    m.started_at = j.at("started_at").get<std::string>();
    m.seed = j.at("seed").get<std::string>();
    m.settings = j.at("settings").get<std::map<std::string, std::string>>();
    for (const auto& d : j.at("inputs")) {
      m.inputs.push_back({d.at("setting").get<std::string>(), d.at("path").get<std::string>(),
                          d.at("fnv1a64").get<std::string>(),
                          d.at("bytes").get<std::uintmax_t>()});
    }
    return m;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed run manifest: ") + e.what());
  }
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write manifest " + path.string());
  out << manifest.to_json();
  if (!out) throw IoError("error writing manifest " + path.string());
}

RunManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return RunManifest::from_json(ss.str());
}

}  // namespace netab::cli
