#include "cli/settings.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include <CLI11.hpp>

#include "netab/errors.hpp"

namespace netab::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto end = comma == std::string::npos ? s.size() : comma;
    auto item = trim(std::string_view(s).substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty()) {
    throw ValidationError("--" + flag_name(key) + ": '" + text + "' is not a valid number");
  }
  return value;
}

}  // namespace

std::string flag_name(const std::string& key) {
  std::string out = key;
  std::replace(out.begin(), out.end(), '_', '-');
  return out;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": expected key = value");
    }
    auto key = normalize_key(trim(std::string_view(text).substr(0, eq)));
    auto value = trim(std::string_view(text).substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    out[key] = value;
  }
  return out;
}

void Settings::declare(CLI::App& app, const std::vector<SettingSpec>& specs) {
  for (const auto& spec : specs) {
    specs_.push_back(spec);
    std::string help = spec.help;
    if (!spec.fallback.empty()) help += " [default: " + spec.fallback + "]";
    options_[spec.key] = app.add_option("--" + flag_name(spec.key), from_flags_[spec.key], help);
  }
}

void Settings::set_default(const std::string& key, std::string value) {
  for (auto& s : specs_) {
    if (s.key == key) s.fallback = std::move(value);
  }
}

void Settings::resolve(const std::map<std::string, std::string>& file_values,
                       const std::string& file_name) {
  for (const auto& [key, value] : file_values) {
    const bool known = std::any_of(specs_.begin(), specs_.end(),
                                   [&](const SettingSpec& s) { return s.key == key; });
    if (!known) throw ValidationError(file_name + ": unknown setting '" + key + "'");
  }
  resolved_.clear();
  for (const auto& spec : specs_) {
    std::string value = spec.fallback;
    if (auto it = file_values.find(spec.key); it != file_values.end()) value = it->second;
    if (options_.at(spec.key)->count() > 0) value = from_flags_.at(spec.key);
    if (spec.is_path && !value.empty()) {
      value = std::filesystem::absolute(value).lexically_normal().string();
    }
    resolved_[spec.key] = value;
  }
}

bool Settings::has(const std::string& key) const {
  auto it = resolved_.find(key);
  return it != resolved_.end() && !it->second.empty();
}

const std::string& Settings::str(const std::string& key) const {
  auto it = resolved_.find(key);
  if (it == resolved_.end()) throw Error("internal: undeclared setting '" + key + "'");
  return it->second;
}

double Settings::real(const std::string& key) const {
  return parse_number<double>(key, str(key));
}

std::uint64_t Settings::u64(const std::string& key) const {
  return parse_number<std::uint64_t>(key, str(key));
}

bool Settings::boolean(const std::string& key) const {
  const auto& v = str(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ValidationError("--" + flag_name(key) + ": expected true or false, got '" + v + "'");
}

std::vector<double> Settings::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(str(key))) out.push_back(parse_number<double>(key, item));
  return out;
}

std::vector<std::uint64_t> Settings::u64s(const std::string& key) const {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(str(key))) {
    out.push_back(parse_number<std::uint64_t>(key, item));
  }
  return out;
}

std::vector<std::string> Settings::words(const std::string& key) const {
  return split_list(str(key));
}

bool Settings::is_path(const std::string& key) const {
  return std::any_of(specs_.begin(), specs_.end(),
                     [&](const SettingSpec& s) { return s.key == key && s.is_path; });
}

}  // namespace netab::cli
