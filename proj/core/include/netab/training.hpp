#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netab/adam.hpp"
#include "netab/corpus.hpp"
#include "netab/model.hpp"
#include "netab/rng.hpp"

namespace netab {

/// Which prediction the gate compares against the input label.
enum class GateScores {
  composed,  // argmax of the transition-composed (noisy) distribution
  clean,     // argmax of the clean head alone
};

struct TrainConfig {
  std::size_t warmup_epochs = 5;
  std::size_t total_epochs = 200;
  std::size_t batch_size = 50;
  double lr = 0.001;
  double lr_decay = 0.96;  // per-epoch multiplicative factor
  double dropout_rate = 0.5;
  std::uint64_t seed = 1;
  bool fine_tune_embeddings = true;
  GateScores gate_scores = GateScores::composed;
  bool share_optimizer_state = false;
  double clip_norm = 0.0;  // global gradient-norm clip, 0 disables

  // Ablations used by equivalence checks.
  bool force_gate_open = false;             // gate keeps every example
  bool mirror_alternating_updates = false;  // baseline: two updates per
                                            // post-warm-up batch, as NetAb does

  void validate() const;
  /// lr * lr_decay^epoch.
  double learning_rate(std::size_t epoch) const;
};

struct EpochRecord {
  std::size_t epoch = 0;
  std::optional<double> noisy_loss;  // absent during warm-up and for the baseline
  std::optional<double> clean_loss;  // absent if no A-step ran
  double gate_fraction = 1.0;
  double val_accuracy = 0.0;
  double learning_rate = 0.0;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;

  /// epoch,noisy_loss,clean_loss,gate_fraction,val_acc,lr (absent losses
  /// are empty fields).
  std::string to_csv() const;
  std::string to_json() const;
};

struct StepStats {
  double noisy_loss = 0.0;
  std::optional<double> clean_loss;
  std::size_t selected = 0;
  std::size_t batch_size = 0;

  double gate_fraction() const {
    return batch_size == 0 ? 0.0 : static_cast<double>(selected) / static_cast<double>(batch_size);
  }
};

/// Adam states for a set of named parameter blocks.
class Optimizer {
 public:
  /// Applies one Adam update to every block from its grad buffer.
  void step(const std::vector<NamedParam>& params, double lr, double clip_norm = 0.0);
  const AdamState* state(const std::string& name) const;

 private:
  std::map<std::string, AdamState> states_;
};

/// Indices i with argmax(scores[i]) == batch[i]->label, in batch order.
std::vector<std::size_t> select_agreeing(Batch batch,
                                         std::span<const std::vector<double>> scores);

/// Inference-mode gate: keeps the examples whose predicted label (per
/// `scores`) equals their input label. Order is preserved; may be empty.
std::vector<const LabeledExample*> gate_select(Batch batch, const NetAbModel& model,
                                               GateScores scores = GateScores::composed);

struct EpochSummary {
  std::optional<double> noisy_loss;
  std::optional<double> clean_loss;
  double gate_fraction = 1.0;
};

/// Runs the alternating schedule on one model. The trainer owns the random
/// stream (shuffling and dropout) and both optimizer states.
class NetAbTrainer {
 public:
  NetAbTrainer(NetAbModel& model, TrainConfig config);

  /// A-network only: clean loss on every full batch; the transition layer
  /// is not touched.
  EpochSummary warmup_epoch(const LabeledCorpus& train);

  /// Ab step on the full batch, gate with the updated model, then A step
  /// on the selected subset (skipped when empty).
  StepStats alternating_step(Batch batch);
  EpochSummary alternating_epoch(const LabeledCorpus& train);

  /// Plain CNN epoch: clean loss on every full batch.
  EpochSummary baseline_epoch(const LabeledCorpus& train);

  /// Warm-up or alternating epoch depending on the epoch counter, then
  /// advances the counter.
  EpochSummary run_epoch(const LabeledCorpus& train);

  std::size_t epoch() const noexcept { return epoch_; }
  void set_epoch(std::size_t epoch) noexcept { epoch_ = epoch; }
  double learning_rate() const { return config_.learning_rate(epoch_); }
  const TrainConfig& config() const noexcept { return config_; }
  Rng& rng() noexcept { return rng_; }

 private:
  std::vector<std::vector<const LabeledExample*>> shuffled_batches(const LabeledCorpus& train);
  std::vector<NamedParam> trainable(Branch branch);
  double clean_update(Batch batch, Optimizer& opt);
  Optimizer& optimizer_ab() { return config_.share_optimizer_state ? opt_a_ : opt_ab_; }
  ForwardOptions forward_options() const;

  NetAbModel& model_;
  TrainConfig config_;
  Rng rng_;
  Optimizer opt_a_;
  Optimizer opt_ab_;
  std::size_t epoch_ = 0;
  std::size_t step_ = 0;
};

struct TrainResult {
  NetAbModel model;  // snapshot with the best validation accuracy
  TrainHistory history;
};

/// Called after every epoch with its record and the current (not best) model.
using EpochObserver = std::function<void(const EpochRecord&, const NetAbModel&)>;

/// Warm-up then alternating training; returns the snapshot with the best
/// validation accuracy (earliest on ties; the final model if `val` is
/// empty). Throws NumericalError on a non-finite loss.
TrainResult train(const LabeledCorpus& train_set, const LabeledCorpus& val_set,
                  NetAbModel model, const TrainConfig& config,
                  const EpochObserver& observer = {});

/// Same pipeline with the clean loss on every full batch: no transition
/// layer, no gate, no warm-up distinction.
TrainResult train_baseline_cnn(const LabeledCorpus& train_set, const LabeledCorpus& val_set,
                               NetAbModel model, const TrainConfig& config,
                               const EpochObserver& observer = {});

/// Model with parameters drawn from a stream derived from `seed`.
NetAbModel make_model(const ModelConfig& config, EmbeddingTable embeddings, std::uint64_t seed);

/// Random-stream identifiers derived from a run seed.
enum class SeedStream : std::uint64_t {
  training = 1,
  model_init = 2,
  embeddings = 3,
  corruption = 4,
  split = 5,
};
Rng stream(std::uint64_t seed, SeedStream which);

}  // namespace netab
