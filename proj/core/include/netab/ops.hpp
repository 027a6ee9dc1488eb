#pragma once

// Differentiable operations recorded on a Tape. Each op computes its forward
// value with the kernels in kernels.hpp and registers the matching backward
// rule.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "netab/rng.hpp"
#include "netab/tape.hpp"
#include "netab/tensor.hpp"

namespace netab::ops {

/// Gathers rows of `table` (|V| x d) for `ids`. When `trainable`, backward
/// scatters row gradients straight into table.grad(); row 0 (padding) never
/// receives gradient.
Var embedding_lookup(Tape& tape, Tensor& table,
                     std::span<const std::int32_t> ids, bool trainable);

Var dropout(Tape& tape, Var x, double rate, Rng& rng, bool training);
Var conv1d_valid(Tape& tape, Var input, Var kernels, Var bias);
Var relu(Tape& tape, Var x);

struct MaxPool {
  Var out;
  std::vector<std::size_t> argmax;
};
MaxPool max_over_time(Tape& tape, Var x);

/// Concatenates 1-D tensors.
Var concat(Tape& tape, std::span<const Var> parts);

/// weight (r x n) * x (n) + bias (r).
Var affine(Tape& tape, Var weight, Var x, Var bias);

Var tanh_map(Tape& tape, Var x);
Var hadamard(Tape& tape, Var a, Var b);
Var softmax(Tape& tape, Var logits);

/// Stacks c vectors of length c into a c x c matrix (row i = rows[i]).
Var stack_rows(Tape& tape, std::span<const Var> rows);

/// out[j] = sum_i q[i][j] * p[i] for a row-stochastic q.
Var mixture(Tape& tape, Var p, Var q);

/// -log(max(probs[label], floor)); scalar.
Var cross_entropy(Tape& tape, Var probs, std::size_t label);

/// Arithmetic mean of scalar nodes.
Var mean(Tape& tape, std::span<const Var> scalars);

}  // namespace netab::ops
