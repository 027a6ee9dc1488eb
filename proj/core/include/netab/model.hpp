#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netab/corpus.hpp"
#include "netab/embeddings.hpp"
#include "netab/ops.hpp"
#include "netab/rng.hpp"
#include "netab/tape.hpp"
#include "netab/tensor.hpp"

namespace netab {

enum class TransitionMode {
  learned,          // Q computed from the encoding by the transition layer
  pinned_identity,  // Q fixed to I, transition layer detached (ablation)
};

struct ModelConfig {
  std::size_t embedding_dim = kDefaultEmbeddingDim;
  std::size_t feature_maps = 100;
  std::vector<std::size_t> windows{3, 4, 5};
  std::size_t classes = 2;
  std::size_t max_len = kDefaultMaxLen;
  /// Half-width of the uniform init for kernels, head weights and W_i.
  double init_scale = 0.01;
  /// Initial value of every b_i entry. Positive values saturate g_i towards
  /// +1 so the +/-1 pattern of f_i yields a diagonally dominant initial Q.
  double transition_bias_init = 2.0;
  TransitionMode transition = TransitionMode::learned;

  std::size_t encoding_dim() const { return feature_maps * windows.size(); }
  void validate() const;
};

struct ConvFilter {
  std::size_t window = 0;
  Tensor kernels;  // window x d x feature_maps
  Tensor bias;     // feature_maps
};

/// Convolutional sentence encoder shared by both branches.
struct EncoderParams {
  std::vector<ConvFilter> filters;
};

/// Softmax classifier producing the clean label distribution.
struct CleanHead {
  Tensor weight;  // c x encoding_dim
  Tensor bias;    // c
};

/// Row i of the transition layer: q_i = softmax(tanh(W_i u + b_i) * f_i).
struct TransitionRow {
  Tensor weight;  // W_i: c x encoding_dim
  Tensor bias;    // b_i: c
  Tensor scale;   // f_i: c
};

struct TransitionParams {
  std::vector<TransitionRow> rows;  // one per clean class
};

/// c x c row-stochastic matrix; row i is the distribution of the observed
/// label given clean label i.
struct TransitionMatrix {
  std::size_t classes = 0;
  std::vector<double> entries;

  double operator()(std::size_t i, std::size_t j) const { return entries[i * classes + j]; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(entries).subspan(i * classes, classes);
  }
  static TransitionMatrix identity(std::size_t classes);
};

struct ModelOutput {
  std::vector<double> clean_probs;
  std::vector<double> noisy_probs;
  TransitionMatrix transition;
  std::vector<double> encoding;
};

/// Which sub-network a parameter list is requested for.
enum class Branch {
  clean,  // A-network: embeddings, encoder, clean head
  noisy,  // Ab-network: the clean parameters plus the transition layer
};

struct NamedParam {
  std::string name;
  Tensor* tensor = nullptr;
};

struct NamedConstParam {
  std::string name;
  const Tensor* tensor = nullptr;
};

// Pure (tape-free) pieces of the forward pass.
TransitionMatrix transition_matrix(std::span<const double> encoding,
                                   const TransitionParams& params);
std::vector<double> noisy_predict(std::span<const double> clean_probs,
                                  const TransitionMatrix& q);
std::vector<double> clean_predict(std::span<const double> encoding, const CleanHead& head);

class NetAbModel {
 public:
  NetAbModel(ModelConfig config, EmbeddingTable embeddings, Rng& init_rng);

  const ModelConfig& config() const noexcept { return config_; }
  void set_transition_mode(TransitionMode mode) noexcept { config_.transition = mode; }

  Tensor& embeddings() noexcept { return embeddings_; }
  const Tensor& embeddings() const noexcept { return embeddings_; }
  EncoderParams& encoder() noexcept { return encoder_; }
  const EncoderParams& encoder() const noexcept { return encoder_; }
  CleanHead& head() noexcept { return head_; }
  const CleanHead& head() const noexcept { return head_; }
  TransitionParams& transition() noexcept { return transition_; }
  const TransitionParams& transition() const noexcept { return transition_; }

  /// Parameter blocks trained by the given branch. Shared blocks are the
  /// same Tensor objects in both lists.
  std::vector<NamedParam> parameters(Branch branch);
  std::vector<NamedConstParam> parameters(Branch branch) const;
  std::vector<NamedParam> all_parameters() { return parameters(Branch::noisy); }
  std::vector<NamedConstParam> all_parameters() const { return parameters(Branch::noisy); }
  void zero_grad();

  /// Inference-mode encoding (no dropout).
  std::vector<double> encode(std::span<const std::int32_t> ids) const;
  std::vector<double> clean_probs(std::span<const std::int32_t> ids) const;
  ModelOutput predict(std::span<const std::int32_t> ids) const;
  /// argmax of the clean distribution; the transition layer is not used.
  int predict_label(std::span<const std::int32_t> ids) const;

 private:
  ModelConfig config_;
  Tensor embeddings_;
  EncoderParams encoder_;
  CleanHead head_;
  TransitionParams transition_;
};

struct ForwardOptions {
  bool training = false;
  double dropout_rate = 0.5;
  bool fine_tune_embeddings = true;
};

/// Records the model's forward pass on a tape. Parameters are bound as tape
/// leaves once per graph, so a whole batch shares them and backward()
/// accumulates into the model's grad buffers.
class ModelGraph {
 public:
  ModelGraph(NetAbModel& model, Tape& tape, bool bind_transition, ForwardOptions options);

  Var encode(std::span<const std::int32_t> ids, Rng& rng);
  Var clean_predict(Var encoding);
  Var transition_matrix(Var encoding);
  Var noisy_predict(Var clean_probs, Var q);

  Tape& tape() noexcept { return tape_; }

 private:
  struct BoundFilter {
    Var kernels, bias;
  };
  struct BoundRow {
    Var weight, bias, scale;
  };
  NetAbModel& model_;
  Tape& tape_;
  ForwardOptions options_;
  std::vector<BoundFilter> filters_;
  Var head_weight_, head_bias_;
  std::vector<BoundRow> rows_;
  bool has_transition_ = false;
};

using Batch = std::span<const LabeledExample* const>;

std::vector<const LabeledExample*> as_batch(const LabeledCorpus& corpus);

/// Mean cross-entropy of the clean prediction against the given labels.
/// Returns nullopt for an empty batch (the caller skips the update). With
/// `accumulate` the gradient is added to the model's grad buffers; the
/// transition layer never receives any.
std::optional<double> clean_loss(NetAbModel& model, Batch batch, Rng& rng,
                                 const ForwardOptions& options, bool accumulate);

/// Mean cross-entropy of the transition-composed prediction against the given
/// labels. Gradient reaches every parameter block.
double noisy_loss(NetAbModel& model, Batch batch, Rng& rng, const ForwardOptions& options,
                  bool accumulate);

}  // namespace netab
