#include "netab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "netab/errors.hpp"
#include "netab/metrics.hpp"

namespace netab {

const char* method_name(Method m) { return m == Method::netab ? "netab" : "cnn"; }

Method parse_method(std::string_view name) {
  if (name == "netab") return Method::netab;
  if (name == "cnn") return Method::cnn;
  throw ValidationError("unknown method '" + std::string(name) + "' (expected netab or cnn)");
}

void sort_results(std::vector<SweepResult>& results) {
  std::stable_sort(results.begin(), results.end(), [](const auto& a, const auto& b) {
    if (a.noise_rate != b.noise_rate) return a.noise_rate < b.noise_rate;
    if (a.method != b.method) return std::string_view(method_name(a.method)) <
                                     std::string_view(method_name(b.method));
    return a.seed < b.seed;
  });
}

namespace {

struct Cell {
  double rate;
  std::size_t rate_index;
  std::uint64_t seed;
};

}  // namespace

std::vector<SweepResult> noise_sweep(const CorpusSplit& clean, const EmbeddingTable& embeddings,
                                     const SweepConfig& config, const SweepProgress& progress) {
  for (double r : config.rates) check_noise_rate(r);
  if (config.seeds.empty() || config.rates.empty() || config.methods.empty()) {
    throw ValidationError("sweep needs at least one rate, seed and method");
  }
  config.model.validate();
  config.train.validate();

  std::vector<Cell> cells;
  for (std::size_t ri = 0; ri < config.rates.size(); ++ri) {
    for (auto seed : config.seeds) cells.push_back({config.rates[ri], ri, seed});
  }

  std::vector<SweepResult> results;
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::string failure_context;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      {
        std::lock_guard lock(mu);
        if (failure) return;
      }
      const Cell cell = cells[i];
      Method current = config.methods.front();
      try {
        // Corruption depends only on (seed, rate) so both methods see the
        // same noisy labels.
        Rng corrupt_rng = stream(cell.seed, SeedStream::corruption).fork(cell.rate_index);
        const LabeledCorpus noisy = corrupt_labels(clean.train, cell.rate, corrupt_rng);
        for (Method method : config.methods) {
          current = method;
          const auto start = std::chrono::steady_clock::now();
          TrainConfig tc = config.train;
          tc.seed = cell.seed;
          NetAbModel model = make_model(config.model, embeddings, cell.seed);
          TrainResult trained = method == Method::netab
                                    ? train(noisy, clean.validation, std::move(model), tc)
                                    : train_baseline_cnn(noisy, clean.validation,
                                                         std::move(model), tc);
          const Metrics m = evaluate(trained.model, clean.test);
          const std::chrono::duration<double> elapsed =
              std::chrono::steady_clock::now() - start;
          SweepResult r{cell.rate, cell.seed, method, m.accuracy, m.f1_pos, m.f1_neg,
                        config.record_wall_time ? elapsed.count() : 0.0};
          if (progress) progress(r);
          std::lock_guard lock(mu);
          results.push_back(r);
        }
      } catch (const std::exception& e) {
        std::lock_guard lock(mu);
        if (!failure) {
          failure = std::current_exception();
          failure_context = "sweep cell (rate " + std::to_string(cell.rate) + ", seed " +
                            std::to_string(cell.seed) + ", method " + method_name(current) +
                            "): " + e.what();
        }
        return;
      }
    }
  };

  const std::size_t n_workers = std::clamp<std::size_t>(config.workers, 1, cells.size());
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  if (failure) {
    try {
      std::rethrow_exception(failure);
    } catch (const NumericalError&) {
      throw NumericalError(failure_context);
    } catch (const ValidationError&) {
      throw ValidationError(failure_context);
    } catch (...) {
      throw Error(failure_context);
    }
  }
  sort_results(results);
  return results;
}

std::vector<SweepSummaryRow> summarize(const std::vector<SweepResult>& input) {
  auto results = input;
  sort_results(results);
  std::vector<SweepSummaryRow> rows;
  for (std::size_t i = 0; i < results.size();) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < results.size() && results[j].noise_rate == results[i].noise_rate &&
           results[j].method == results[i].method) {
      sum += results[j].accuracy;
      ++j;
    }
    const double n = static_cast<double>(j - i);
    const double mean = sum / n;
    double var = 0.0;
    for (std::size_t k = i; k < j; ++k) var += (results[k].accuracy - mean) * (results[k].accuracy - mean);
    rows.push_back({results[i].noise_rate, results[i].method, mean, std::sqrt(var / n), j - i});
    i = j;
  }
  return rows;
}

}  // namespace netab
