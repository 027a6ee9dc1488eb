#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "netab/corpus.hpp"
#include "netab/embeddings.hpp"
#include "netab/model.hpp"
#include "netab/training.hpp"

namespace netab {

enum class Method { netab, cnn };

const char* method_name(Method m);
Method parse_method(std::string_view name);

struct SweepResult {
  double noise_rate = 0.0;
  std::uint64_t seed = 0;
  Method method = Method::netab;
  double accuracy = 0.0;
  double f1_pos = 0.0;
  double f1_neg = 0.0;
  double wall_time = 0.0;  // seconds

  bool operator==(const SweepResult&) const = default;
};

struct SweepConfig {
  std::vector<double> rates{0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  std::vector<std::uint64_t> seeds{1};
  std::vector<Method> methods{Method::netab, Method::cnn};
  ModelConfig model;
  TrainConfig train;  // train.seed is replaced by each sweep seed
  std::size_t workers = 1;
  bool record_wall_time = true;
};

/// Called from worker threads after each finished cell.
using SweepProgress = std::function<void(const SweepResult&)>;

/// For every (rate, seed) corrupt the training split, train
/// every method with identical configuration and seed, and score each on the
/// untouched test split. Cells run on `workers` threads; the returned list
/// is sorted by (noise_rate, method, seed).
std::vector<SweepResult> noise_sweep(const CorpusSplit& clean, const EmbeddingTable& embeddings,
                                     const SweepConfig& config,
                                     const SweepProgress& progress = {});

/// Sorts by (noise_rate, method, seed).
void sort_results(std::vector<SweepResult>& results);

enum class ResultFormat { csv, json };

/// Floats carry 6 significant digits; output is byte-identical for
/// identical input.
std::string results_to_csv(std::vector<SweepResult> results);
std::string results_to_json(std::vector<SweepResult> results);
std::vector<SweepResult> results_from_json(const std::string& text);
void emit_results(const std::vector<SweepResult>& results, const std::filesystem::path& path,
                  ResultFormat format);

struct SweepSummaryRow {
  double noise_rate = 0.0;
  Method method = Method::netab;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;  // population standard deviation over seeds
  std::size_t runs = 0;
};

std::vector<SweepSummaryRow> summarize(const std::vector<SweepResult>& results);

}  // namespace netab
