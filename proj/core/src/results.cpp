#include <cstdio>
#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "netab/errors.hpp"
#include "netab/sweep.hpp"

namespace netab {

namespace {

std::string six_digits(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double round_six(double v) { return std::strtod(six_digits(v).c_str(), nullptr); }

}  // namespace

std::string results_to_csv(std::vector<SweepResult> results) {
  sort_results(results);
  std::string out = "noise_rate,seed,method,accuracy,f1_pos,f1_neg,wall_time\n";
  for (const auto& r : results) {
    out += six_digits(r.noise_rate) + "," + std::to_string(r.seed) + "," +
           method_name(r.method) + "," + six_digits(r.accuracy) + "," + six_digits(r.f1_pos) +
           "," + six_digits(r.f1_neg) + "," + six_digits(r.wall_time) + "\n";
  }
  return out;
}

std::string results_to_json(std::vector<SweepResult> results) {
  sort_results(results);
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results) {
    arr.push_back({{"noise_rate", round_six(r.noise_rate)},
                   {"seed", r.seed},
                   {"method", method_name(r.method)},
                   {"accuracy", round_six(r.accuracy)},
                   {"f1_pos", round_six(r.f1_pos)},
                   {"f1_neg", round_six(r.f1_neg)},
                   {"wall_time", round_six(r.wall_time)}});
  }
  return arr.dump(2) + "\n";
}

std::vector<SweepResult> results_from_json(const std::string& text) {
  std::vector<SweepResult> out;
  try {
    for (const auto& j : nlohmann::json::parse(text)) {
      SweepResult r;
      r.noise_rate = j.at("noise_rate").get<double>();
      r.seed = j.at("seed").get<std::uint64_t>();
      r.method = parse_method(j.at("method").get<std::string>());
      r.accuracy = j.at("accuracy").get<double>();
      r.f1_pos = j.at("f1_pos").get<double>();
      r.f1_neg = j.at("f1_neg").get<double>();
      r.wall_time = j.at("wall_time").get<double>();
      out.push_back(r);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed results JSON: ") + e.what());
  }
  return out;
}

void emit_results(const std::vector<SweepResult>& results, const std::filesystem::path& path,
                  ResultFormat format) {
  const std::string text =
      format == ResultFormat::csv ? results_to_csv(results) : results_to_json(results);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write results file " + path.string());
  out << text;
  if (!out) throw IoError("error writing results file " + path.string());
}

}  // namespace netab
