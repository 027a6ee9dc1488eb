#include "netab/model.hpp"

#include <algorithm>
#include <cmath>

#include "netab/errors.hpp"
#include "netab/kernels.hpp"

namespace netab {

void ModelConfig::validate() const {
  if (embedding_dim == 0 || feature_maps == 0 || classes < 2 || max_len == 0) {
    throw ValidationError("model dimensions must be positive (and classes >= 2)");
  }
  if (windows.empty()) throw ValidationError("at least one convolution window is required");
  for (auto w : windows) {
    if (w == 0 || w > max_len) {
      throw ValidationError("window size " + std::to_string(w) +
                            " must be in [1, max_len=" + std::to_string(max_len) + "]");
    }
  }
  if (!(init_scale >= 0.0) || !std::isfinite(transition_bias_init)) {
    throw ValidationError("invalid initialisation scale");
  }
}

TransitionMatrix TransitionMatrix::identity(std::size_t classes) {
  TransitionMatrix q{classes, std::vector<double>(classes * classes, 0.0)};
  for (std::size_t i = 0; i < classes; ++i) q.entries[i * classes + i] = 1.0;
  return q;
}

namespace {

Tensor uniform_tensor(Shape shape, double scale, Rng& rng) {
  Tensor t(std::move(shape));
  for (double& v : t.values()) v = rng.uniform(-scale, scale);
  return t;
}

std::vector<double> affine(const Tensor& weight, std::span<const double> x,
                           const Tensor& bias) {
  const std::size_t rows = weight.dim(0);
  const std::size_t cols = weight.dim(1);
  std::vector<double> out(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = bias[r];
    for (std::size_t c = 0; c < cols; ++c) acc += weight.at(r, c) * x[c];
    out[r] = acc;
  }
  return out;
}

std::size_t argmax(std::span<const double> v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

TransitionMatrix transition_matrix(std::span<const double> encoding,
                                   const TransitionParams& params) {
  const std::size_t c = params.rows.size();
  TransitionMatrix q{c, {}};
  q.entries.reserve(c * c);
  for (const auto& row : params.rows) {
    auto g = affine(row.weight, encoding, row.bias);
    for (std::size_t j = 0; j < c; ++j) g[j] = std::tanh(g[j]) * row.scale[j];
    const auto qi = softmax(g);
    q.entries.insert(q.entries.end(), qi.begin(), qi.end());
  }
  return q;
}

std::vector<double> noisy_predict(std::span<const double> clean_probs,
                                  const TransitionMatrix& q) {
  const std::size_t c = q.classes;
  if (clean_probs.size() != c) {
    throw ShapeError("noisy_predict: " + std::to_string(clean_probs.size()) +
                     " clean probabilities for a " + std::to_string(c) + "x" +
                     std::to_string(c) + " transition matrix");
  }
  std::vector<double> out(c, 0.0);
  for (std::size_t j = 0; j < c; ++j) {
    for (std::size_t i = 0; i < c; ++i) out[j] += q(i, j) * clean_probs[i];
  }
  return out;
}

std::vector<double> clean_predict(std::span<const double> encoding, const CleanHead& head) {
  return softmax(affine(head.weight, encoding, head.bias));
}

NetAbModel::NetAbModel(ModelConfig config, EmbeddingTable embeddings, Rng& init_rng)
    : config_(std::move(config)), embeddings_(std::move(embeddings.matrix)) {
  config_.validate();
  if (embeddings_.rank() != 2 || embeddings_.dim(1) != config_.embedding_dim) {
    throw ShapeError("embedding table " + shape_to_string(embeddings_.shape()) +
                     " does not match embedding_dim " +
                     std::to_string(config_.embedding_dim));
  }
  const std::size_t d = config_.embedding_dim;
  const std::size_t m = config_.feature_maps;
  const std::size_t c = config_.classes;
  const std::size_t enc = config_.encoding_dim();
  const double s = config_.init_scale;

  for (auto w : config_.windows) {
    encoder_.filters.push_back(
        ConvFilter{w, uniform_tensor({w, d, m}, s, init_rng), Tensor({m}, 0.0)});
  }
  head_.weight = uniform_tensor({c, enc}, s, init_rng);
  head_.bias = Tensor({c}, 0.0);
  for (std::size_t i = 0; i < c; ++i) {
    TransitionRow row;
    row.weight = uniform_tensor({c, enc}, s, init_rng);
    row.bias = Tensor({c}, config_.transition_bias_init);
    row.scale = Tensor({c}, -1.0);
    row.scale[i] = 1.0;
    transition_.rows.push_back(std::move(row));
  }
}

std::vector<NamedParam> NetAbModel::parameters(Branch branch) {
  std::vector<NamedParam> out;
  out.push_back({"embeddings", &embeddings_});
  for (auto& f : encoder_.filters) {
    const std::string prefix = "encoder.w" + std::to_string(f.window);
    out.push_back({prefix + ".kernels", &f.kernels});
    out.push_back({prefix + ".bias", &f.bias});
  }
  out.push_back({"head.weight", &head_.weight});
  out.push_back({"head.bias", &head_.bias});
  if (branch == Branch::noisy) {
    for (std::size_t i = 0; i < transition_.rows.size(); ++i) {
      auto& row = transition_.rows[i];
      const std::string prefix = "transition." + std::to_string(i);
      out.push_back({prefix + ".weight", &row.weight});
      out.push_back({prefix + ".bias", &row.bias});
      out.push_back({prefix + ".scale", &row.scale});
    }
  }
  return out;
}

std::vector<NamedConstParam> NetAbModel::parameters(Branch branch) const {
  std::vector<NamedConstParam> out;
  for (auto& p : const_cast<NetAbModel*>(this)->parameters(branch)) {
    out.push_back({std::move(p.name), p.tensor});
  }
  return out;
}

void NetAbModel::zero_grad() {
  for (auto& p : all_parameters()) p.tensor->zero_grad();
}

std::vector<double> NetAbModel::encode(std::span<const std::int32_t> ids) const {
  const std::size_t d = config_.embedding_dim;
  const std::size_t vocab = embeddings_.dim(0);
  Tensor v({ids.size(), d});
  for (std::size_t t = 0; t < ids.size(); ++t) {
    if (ids[t] < 0 || static_cast<std::size_t>(ids[t]) >= vocab) {
      throw ShapeError("token id " + std::to_string(ids[t]) +
                       " outside vocabulary of size " + std::to_string(vocab));
    }
    std::copy_n(embeddings_.data() + static_cast<std::size_t>(ids[t]) * d, d,
                v.data() + t * d);
  }
  std::vector<double> h;
  h.reserve(config_.encoding_dim());
  for (const auto& f : encoder_.filters) {
    auto pooled = max_over_time(relu(conv1d_valid(v, f.kernels, f.bias)));
    h.insert(h.end(), pooled.values.values().begin(), pooled.values.values().end());
  }
  return h;
}

std::vector<double> NetAbModel::clean_probs(std::span<const std::int32_t> ids) const {
  return clean_predict(encode(ids), head_);
}

ModelOutput NetAbModel::predict(std::span<const std::int32_t> ids) const {
  ModelOutput out;
  out.encoding = encode(ids);
  out.clean_probs = clean_predict(out.encoding, head_);
  out.transition = config_.transition == TransitionMode::pinned_identity
                       ? TransitionMatrix::identity(config_.classes)
                       : transition_matrix(out.encoding, transition_);
  out.noisy_probs = noisy_predict(out.clean_probs, out.transition);
  return out;
}

int NetAbModel::predict_label(std::span<const std::int32_t> ids) const {
  return static_cast<int>(argmax(clean_probs(ids)));
}

ModelGraph::ModelGraph(NetAbModel& model, Tape& tape, bool bind_transition,
                       ForwardOptions options)
    : model_(model), tape_(tape), options_(options) {
  check_dropout_rate(options_.dropout_rate);
  for (auto& f : model_.encoder().filters) {
    filters_.push_back({tape_.leaf(f.kernels), tape_.leaf(f.bias)});
  }
  head_weight_ = tape_.leaf(model_.head().weight);
  head_bias_ = tape_.leaf(model_.head().bias);
  has_transition_ =
      bind_transition && model_.config().transition == TransitionMode::learned;
  if (has_transition_) {
    for (auto& row : model_.transition().rows) {
      rows_.push_back({tape_.leaf(row.weight), tape_.leaf(row.bias), tape_.leaf(row.scale)});
    }
  }
}

Var ModelGraph::encode(std::span<const std::int32_t> ids, Rng& rng) {
  Var v = ops::embedding_lookup(tape_, model_.embeddings(), ids,
                                options_.fine_tune_embeddings);
  v = ops::dropout(tape_, v, options_.dropout_rate, rng, options_.training);
  std::vector<Var> pooled;
  pooled.reserve(filters_.size());
  for (const auto& f : filters_) {
    Var conv = ops::conv1d_valid(tape_, v, f.kernels, f.bias);
    pooled.push_back(ops::max_over_time(tape_, ops::relu(tape_, conv)).out);
  }
  return ops::concat(tape_, pooled);
}

Var ModelGraph::clean_predict(Var encoding) {
  return ops::softmax(tape_, ops::affine(tape_, head_weight_, encoding, head_bias_));
}

Var ModelGraph::transition_matrix(Var encoding) {
  if (!has_transition_) {
    const std::size_t c = model_.config().classes;
    return tape_.constant(Tensor({c, c}, TransitionMatrix::identity(c).entries));
  }
  std::vector<Var> rows;
  rows.reserve(rows_.size());
  for (const auto& r : rows_) {
    Var g = ops::tanh_map(tape_, ops::affine(tape_, r.weight, encoding, r.bias));
    rows.push_back(ops::softmax(tape_, ops::hadamard(tape_, g, r.scale)));
  }
  return ops::stack_rows(tape_, rows);
}

Var ModelGraph::noisy_predict(Var clean_probs, Var q) {
  return ops::mixture(tape_, clean_probs, q);
}

std::vector<const LabeledExample*> as_batch(const LabeledCorpus& corpus) {
  std::vector<const LabeledExample*> out;
  out.reserve(corpus.size());
  for (const auto& ex : corpus.examples) out.push_back(&ex);
  return out;
}

namespace {

double finish(Tape& tape, std::vector<Var>& losses, bool accumulate) {
  Var total = ops::mean(tape, losses);
  const double value = tape.value(total)[0];
  if (!std::isfinite(value)) throw NumericalError("loss is not finite");
  if (accumulate) tape.backward(total);
  return value;
}

std::size_t checked_label(const LabeledExample& ex, std::size_t classes) {
  if (ex.label < 0 || static_cast<std::size_t>(ex.label) >= classes) {
    throw ValidationError("label " + std::to_string(ex.label) + " out of range");
  }
  return static_cast<std::size_t>(ex.label);
}

}  // namespace

std::optional<double> clean_loss(NetAbModel& model, Batch batch, Rng& rng,
                                 const ForwardOptions& options, bool accumulate) {
  if (batch.empty()) return std::nullopt;
  Tape tape;
  ModelGraph graph(model, tape, false, options);
  std::vector<Var> losses;
  losses.reserve(batch.size());
  for (const LabeledExample* ex : batch) {
    Var probs = graph.clean_predict(graph.encode(ex->ids, rng));
    losses.push_back(ops::cross_entropy(tape, probs, checked_label(*ex, model.config().classes)));
  }
  return finish(tape, losses, accumulate);
}

double noisy_loss(NetAbModel& model, Batch batch, Rng& rng, const ForwardOptions& options,
                  bool accumulate) {
  if (batch.empty()) throw ValidationError("noisy_loss: empty batch");
  Tape tape;
  ModelGraph graph(model, tape, true, options);
  std::vector<Var> losses;
  losses.reserve(batch.size());
  for (const LabeledExample* ex : batch) {
    Var h = graph.encode(ex->ids, rng);
    Var noisy = graph.noisy_predict(graph.clean_predict(h), graph.transition_matrix(h));
    losses.push_back(ops::cross_entropy(tape, noisy, checked_label(*ex, model.config().classes)));
  }
  return finish(tape, losses, accumulate);
}

}  // namespace netab
