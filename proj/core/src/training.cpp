#include "netab/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <json.hpp>

#include "netab/errors.hpp"
#include "netab/metrics.hpp"

namespace netab {

void TrainConfig::validate() const {
  if (total_epochs == 0) throw ValidationError("total_epochs must be positive");
  if (warmup_epochs >= total_epochs) {
    throw ValidationError("warmup_epochs (" + std::to_string(warmup_epochs) +
                          ") must be smaller than total_epochs (" +
                          std::to_string(total_epochs) + ")");
  }
  if (batch_size == 0) throw ValidationError("batch_size must be at least 1");
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ValidationError("lr must be positive");
  if (!(lr_decay > 0.0 && lr_decay <= 1.0)) {
    throw ValidationError("lr_decay must be in (0, 1]");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw ValidationError("dropout_rate must be in [0, 1)");
  }
  if (!(clip_norm >= 0.0)) throw ValidationError("clip_norm must be non-negative");
}

double TrainConfig::learning_rate(std::size_t epoch) const {
  return lr * std::pow(lr_decay, static_cast<double>(epoch));
}

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

}  // namespace

std::string TrainHistory::to_csv() const {
  std::string out = "epoch,noisy_loss,clean_loss,gate_fraction,val_acc,lr\n";
  for (const auto& r : epochs) {
    out += std::to_string(r.epoch) + "," + format_optional(r.noisy_loss) + "," +
           format_optional(r.clean_loss) + "," + format_number(r.gate_fraction) + "," +
           format_number(r.val_accuracy) + "," + format_number(r.learning_rate) + "\n";
  }
  return out;
}

std::string TrainHistory::to_json() const {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : epochs) {
    nlohmann::json j{{"epoch", r.epoch},
                     {"noisy_loss", nullptr},
                     {"clean_loss", nullptr},
                     {"gate_fraction", r.gate_fraction},
                     {"val_acc", r.val_accuracy},
                     {"lr", r.learning_rate}};
    if (r.noisy_loss) j["noisy_loss"] = *r.noisy_loss;
    if (r.clean_loss) j["clean_loss"] = *r.clean_loss;
    records.push_back(std::move(j));
  }
  return nlohmann::json{{"best_epoch", best_epoch}, {"epochs", records}}.dump(2) + "\n";
}

void Optimizer::step(const std::vector<NamedParam>& params, double lr, double clip_norm) {
  double scale = 1.0;
  if (clip_norm > 0.0) {
    double sq = 0.0;
    for (const auto& p : params) {
      for (double g : p.tensor->grad()) sq += g * g;
    }
    const double norm = std::sqrt(sq);
    if (norm > clip_norm) scale = clip_norm / norm;
  }
  std::vector<double> scaled;
  for (const auto& p : params) {
    std::span<const double> g = p.tensor->grad();
    if (scale != 1.0) {
      scaled.assign(g.begin(), g.end());
      for (double& v : scaled) v *= scale;
      g = scaled;
    }
    adam_step(*p.tensor, g, states_[p.name], lr, p.name);
  }
}

const AdamState* Optimizer::state(const std::string& name) const {
  auto it = states_.find(name);
  return it == states_.end() ? nullptr : &it->second;
}

std::vector<std::size_t> select_agreeing(Batch batch,
                                         std::span<const std::vector<double>> scores) {
  if (scores.size() != batch.size()) {
    throw ShapeError("gate: " + std::to_string(scores.size()) + " score vectors for " +
                     std::to_string(batch.size()) + " examples");
  }
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto& s = scores[i];
    const auto predicted = std::max_element(s.begin(), s.end()) - s.begin();
    if (predicted == batch[i]->label) kept.push_back(i);
  }
  return kept;
}

std::vector<const LabeledExample*> gate_select(Batch batch, const NetAbModel& model,
                                               GateScores scores) {
  std::vector<std::vector<double>> predicted;
  predicted.reserve(batch.size());
  for (const LabeledExample* ex : batch) {
    if (scores == GateScores::clean) {
      predicted.push_back(model.clean_probs(ex->ids));
    } else {
      predicted.push_back(model.predict(ex->ids).noisy_probs);
    }
  }
  std::vector<const LabeledExample*> out;
  for (std::size_t i : select_agreeing(batch, predicted)) out.push_back(batch[i]);
  return out;
}

NetAbTrainer::NetAbTrainer(NetAbModel& model, TrainConfig config)
    : model_(model), config_(std::move(config)),
      rng_(stream(config_.seed, SeedStream::training)) {
  config_.validate();
}

ForwardOptions NetAbTrainer::forward_options() const {
  return ForwardOptions{true, config_.dropout_rate, config_.fine_tune_embeddings};
}

std::vector<NamedParam> NetAbTrainer::trainable(Branch branch) {
  auto params = model_.parameters(branch);
  if (!config_.fine_tune_embeddings) {
    std::erase_if(params, [](const NamedParam& p) { return p.name == "embeddings"; });
  }
  return params;
}

std::vector<std::vector<const LabeledExample*>> NetAbTrainer::shuffled_batches(
    const LabeledCorpus& train) {
  if (train.empty()) throw ValidationError("training set is empty");
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng_.shuffle(std::span<std::size_t>(order));
  std::vector<std::vector<const LabeledExample*>> batches;
  for (std::size_t start = 0; start < order.size(); start += config_.batch_size) {
    const std::size_t end = std::min(order.size(), start + config_.batch_size);
    auto& b = batches.emplace_back();
    for (std::size_t i = start; i < end; ++i) b.push_back(&train.examples[order[i]]);
  }
  return batches;
}

namespace {

template <typename F>
auto with_context(std::size_t epoch, std::size_t step, F&& f) {
  try {
    return f();
  } catch (const NumericalError& e) {
    throw NumericalError("epoch " + std::to_string(epoch) + ", step " + std::to_string(step) +
                         ": " + e.what());
  }
}

struct Mean {
  double total = 0.0;
  std::size_t count = 0;
  void add(double v) {
    total += v;
    ++count;
  }
  std::optional<double> value() const {
    return count == 0 ? std::nullopt : std::optional<double>(total / static_cast<double>(count));
  }
};

}  // namespace

double NetAbTrainer::clean_update(Batch batch, Optimizer& opt) {
  model_.zero_grad();
  const auto loss = with_context(epoch_, step_, [&] {
    return *clean_loss(model_, batch, rng_, forward_options(), true);
  });
  opt.step(trainable(Branch::clean), learning_rate(), config_.clip_norm);
  return loss;
}

EpochSummary NetAbTrainer::warmup_epoch(const LabeledCorpus& train) {
  Mean clean;
  for (const auto& batch : shuffled_batches(train)) {
    clean.add(clean_update(batch, opt_a_));
    ++step_;
  }
  return EpochSummary{std::nullopt, clean.value(), 1.0};
}

StepStats NetAbTrainer::alternating_step(Batch batch) {
  StepStats stats;
  stats.batch_size = batch.size();

  model_.zero_grad();
  stats.noisy_loss = with_context(epoch_, step_, [&] {
    return noisy_loss(model_, batch, rng_, forward_options(), true);
  });
  optimizer_ab().step(trainable(Branch::noisy), learning_rate(), config_.clip_norm);

  std::vector<const LabeledExample*> selected;
  if (config_.force_gate_open) {
    selected.assign(batch.begin(), batch.end());
  } else {
    selected = gate_select(batch, model_, config_.gate_scores);
  }
  stats.selected = selected.size();
  if (!selected.empty()) stats.clean_loss = clean_update(selected, opt_a_);
  ++step_;
  return stats;
}

EpochSummary NetAbTrainer::alternating_epoch(const LabeledCorpus& train) {
  Mean noisy, clean;
  std::size_t selected = 0, seen = 0;
  for (const auto& batch : shuffled_batches(train)) {
    const auto stats = alternating_step(batch);
    noisy.add(stats.noisy_loss);
    if (stats.clean_loss) clean.add(*stats.clean_loss);
    selected += stats.selected;
    seen += stats.batch_size;
  }
  return EpochSummary{noisy.value(), clean.value(),
                      static_cast<double>(selected) / static_cast<double>(seen)};
}

EpochSummary NetAbTrainer::baseline_epoch(const LabeledCorpus& train) {
  Mean clean;
  const bool mirror = config_.mirror_alternating_updates && epoch_ >= config_.warmup_epochs;
  for (const auto& batch : shuffled_batches(train)) {
    if (mirror) clean_update(batch, optimizer_ab());
    clean.add(clean_update(batch, opt_a_));
    ++step_;
  }
  return EpochSummary{std::nullopt, clean.value(), 1.0};
}

EpochSummary NetAbTrainer::run_epoch(const LabeledCorpus& train) {
  auto summary = epoch_ < config_.warmup_epochs ? warmup_epoch(train) : alternating_epoch(train);
  ++epoch_;
  return summary;
}

namespace {

enum class Schedule { netab, baseline };

NetAbModel snapshot(const NetAbModel& model) {
  NetAbModel copy = model;
  for (auto& p : copy.all_parameters()) p.tensor->drop_grad();
  return copy;
}

TrainResult run_training(const LabeledCorpus& train_set, const LabeledCorpus& val_set,
                         NetAbModel model, const TrainConfig& config, Schedule schedule,
                         const EpochObserver& observer) {
  config.validate();
  if (train_set.empty()) throw ValidationError("training set is empty");
  NetAbTrainer trainer(model, config);
  TrainHistory history;
  std::optional<NetAbModel> best;
  double best_acc = -1.0;

  for (std::size_t e = 0; e < config.total_epochs; ++e) {
    EpochRecord record;
    record.epoch = e;
    record.learning_rate = trainer.learning_rate();
    EpochSummary summary;
    if (schedule == Schedule::baseline) {
      summary = trainer.baseline_epoch(train_set);
      trainer.set_epoch(e + 1);
    } else {
      summary = trainer.run_epoch(train_set);
    }
    record.noisy_loss = summary.noisy_loss;
    record.clean_loss = summary.clean_loss;
    record.gate_fraction = summary.gate_fraction;
    record.val_accuracy = accuracy(model, val_set);
    history.epochs.push_back(record);
    if (observer) observer(record, model);

    if (!val_set.empty() && record.val_accuracy > best_acc) {
      best_acc = record.val_accuracy;
      history.best_epoch = e;
      best = snapshot(model);
    }
  }
  if (!best) {
    history.best_epoch = config.total_epochs - 1;
    best = snapshot(model);
  }
  return TrainResult{std::move(*best), std::move(history)};
}

}  // namespace

TrainResult train(const LabeledCorpus& train_set, const LabeledCorpus& val_set,
                  NetAbModel model, const TrainConfig& config, const EpochObserver& observer) {
  return run_training(train_set, val_set, std::move(model), config, Schedule::netab, observer);
}

TrainResult train_baseline_cnn(const LabeledCorpus& train_set, const LabeledCorpus& val_set,
                               NetAbModel model, const TrainConfig& config,
                               const EpochObserver& observer) {
  return run_training(train_set, val_set, std::move(model), config, Schedule::baseline,
                      observer);
}

NetAbModel make_model(const ModelConfig& config, EmbeddingTable embeddings, std::uint64_t seed) {
  Rng rng = stream(seed, SeedStream::model_init);
  return NetAbModel(config, std::move(embeddings), rng);
}

Rng stream(std::uint64_t seed, SeedStream which) {
  return Rng(seed).fork(static_cast<std::uint64_t>(which));
}

}  // namespace netab
