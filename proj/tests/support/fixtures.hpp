#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "netab/corpus.hpp"
#include "netab/embeddings.hpp"
#include "netab/grad_check.hpp"
#include "netab/model.hpp"
#include "netab/rng.hpp"
#include "netab/tensor.hpp"
#include "netab/text.hpp"

namespace netab::testing {

inline Tensor random_tensor(Shape shape, Rng& rng, double scale = 1.0) {
  Tensor t(std::move(shape));
  for (double& v : t.values()) v = rng.uniform(-scale, scale);
  return t;
}

/// Small model dimensions so gradient checks and training tests run fast.
inline ModelConfig tiny_model_config() {
  ModelConfig c;
  c.embedding_dim = 6;
  c.feature_maps = 3;
  c.windows = {2, 3};
  c.max_len = 8;
  return c;
}

/// Records where "good" marks positive and "bad" negative sentences; the
/// remaining words are shared filler.
inline std::vector<TextRecord> separable_records(std::size_t n, std::uint64_t seed = 3) {
  static const char* filler[] = {"the", "movie", "plot", "was", "a", "film",
                                 "acting", "story", "it", "this"};
  Rng rng(seed);
  std::vector<TextRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    TextRecord r;
    r.label = static_cast<int>(i % 2);
    const std::size_t len = 3 + rng.below(3);
    const std::size_t cue_at = rng.below(len);
    for (std::size_t w = 0; w < len; ++w) {
      if (!r.text.empty()) r.text += ' ';
      r.text += w == cue_at ? (r.label == kPositive ? "good" : "bad") : filler[rng.below(10)];
    }
    out.push_back(std::move(r));
  }
  return out;
}

struct ToyData {
  Vocabulary vocab;
  LabeledCorpus corpus;
};

inline ToyData separable_corpus(std::size_t n, std::size_t max_len = 8,
                                std::uint64_t seed = 3) {
  ToyData d;
  auto records = separable_records(n, seed);
  extend_vocabulary(d.vocab, records);
  d.corpus = encode_corpus(records, d.vocab, "toy", max_len);
  return d;
}

/// Model with every parameter drawn uniformly from [-scale, scale] (pad row
/// kept zero), which makes gradients comfortably non-zero for checks.
inline NetAbModel randomized_model(const ModelConfig& config, std::size_t vocab_size,
                                   std::uint64_t seed, double scale = 0.5) {
  Rng rng(seed);
  EmbeddingTable table{Tensor({vocab_size, config.embedding_dim}),
                       std::vector<std::uint8_t>(vocab_size, 0)};
  NetAbModel model(config, std::move(table), rng);
  for (auto& p : model.all_parameters()) {
    for (double& v : p.tensor->values()) v = rng.uniform(-scale, scale);
  }
  auto emb = model.embeddings().values();
  for (std::size_t b = 0; b < config.embedding_dim; ++b) emb[b] = 0.0;
  return model;
}

inline std::vector<double> vec(std::span<const double> s) { return {s.begin(), s.end()}; }

inline std::vector<double> flatten(const std::vector<NamedParam>& params) {
  std::vector<double> out;
  for (const auto& p : params) {
    out.insert(out.end(), p.tensor->values().begin(), p.tensor->values().end());
  }
  return out;
}

inline void assign(const std::vector<NamedParam>& params, std::span<const double> flat) {
  std::size_t off = 0;
  for (const auto& p : params) {
    auto v = p.tensor->values();
    std::copy(flat.begin() + off, flat.begin() + off + v.size(), v.begin());
    off += v.size();
  }
}

/// Wraps clean_loss / noisy_loss as a function of every model parameter. The
/// dropout stream is re-seeded per call so the loss is a fixed function.
inline LossAndGradient model_loss_fn(NetAbModel& model, std::vector<const LabeledExample*> batch,
                                     bool noisy, ForwardOptions options,
                                     std::uint64_t dropout_seed = 17) {
  return [&model, batch = std::move(batch), noisy, options, dropout_seed](
             std::span<const double> p, std::span<double> grad) {
    auto params = model.all_parameters();
    assign(params, p);
    model.zero_grad();
    Rng rng(dropout_seed);
    const bool want = !grad.empty();
    const double loss = noisy ? noisy_loss(model, batch, rng, options, want)
                              : *clean_loss(model, batch, rng, options, want);
    if (want) {
      std::size_t off = 0;
      for (const auto& q : params) {
        auto g = q.tensor->grad();
        std::copy(g.begin(), g.end(), grad.begin() + off);
        off += g.size();
      }
    }
    return loss;
  };
}

}  // namespace netab::testing
