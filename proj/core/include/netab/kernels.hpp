#pragma once

// Forward math for the primitives the model is built from. These are the
// plain-value versions; ops.hpp records the same computations on a Tape.

#include <cstddef>
#include <span>
#include <vector>

#include "netab/rng.hpp"
#include "netab/tensor.hpp"

namespace netab {

/// Smallest probability cross_entropy will take the log of.
inline constexpr double kProbabilityFloor = 1e-12;

/// Valid (no padding) 1-D convolution over the time axis.
///   input   L x d
///   kernels w x d x m
///   bias    m
/// Returns (L - w + 1) x m.
Tensor conv1d_valid(const Tensor& input, const Tensor& kernels,
                    const Tensor& bias);

struct MaxPoolResult {
  Tensor values;                    // m
  std::vector<std::size_t> argmax;  // first row attaining each column max
};

/// Column-wise max over the rows of a T x m tensor.
MaxPoolResult max_over_time(const Tensor& input);

Tensor tanh_map(const Tensor& input);
Tensor relu(const Tensor& input);

std::vector<double> softmax(std::span<const double> logits);
Tensor softmax(const Tensor& logits);

/// -log(max(probs[label], kProbabilityFloor)).
double cross_entropy(std::span<const double> probs, std::size_t label);

/// Inverted dropout. Inference mode (or rate 0) returns the input unchanged
/// and consumes no random numbers.
Tensor dropout(const Tensor& input, double rate, Rng& rng, bool training);

/// Keep-mask scale factors for dropout: 0 or 1/(1-rate) per element.
std::vector<double> dropout_mask(std::size_t n, double rate, Rng& rng);

void check_dropout_rate(double rate);

}  // namespace netab
