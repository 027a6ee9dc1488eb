#include "netab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "netab/errors.hpp"

namespace netab {

namespace {

void check_conv_shapes(const Tensor& input, const Tensor& kernels,
                       const Tensor& bias) {
  if (input.rank() != 2) {
    throw ShapeError("conv1d_valid: input must be L x d, got " +
                     shape_to_string(input.shape()));
  }
  if (kernels.rank() != 3) {
    throw ShapeError("conv1d_valid: kernels must be w x d x m, got " +
                     shape_to_string(kernels.shape()));
  }
  if (input.dim(1) != kernels.dim(1)) {
    throw ShapeError("conv1d_valid: embedding width mismatch, input has d=" +
                     std::to_string(input.dim(1)) + ", kernels expect d=" +
                     std::to_string(kernels.dim(1)));
  }
  if (bias.rank() != 1 || bias.dim(0) != kernels.dim(2)) {
    throw ShapeError("conv1d_valid: bias must be [" +
                     std::to_string(kernels.dim(2)) + "], got " +
                     shape_to_string(bias.shape()));
  }
  if (input.dim(0) < kernels.dim(0)) {
    throw ShapeError("conv1d_valid: sequence length " +
                     std::to_string(input.dim(0)) +
                     " is shorter than window " +
                     std::to_string(kernels.dim(0)) +
                     "; pad the input to at least the window size");
  }
}

bool row_is_zero(const double* row, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (row[i] != 0.0) return false;
  }
  return true;
}

}  // namespace

Tensor conv1d_valid(const Tensor& input, const Tensor& kernels,
                    const Tensor& bias) {
  check_conv_shapes(input, kernels, bias);
  const std::size_t len = input.dim(0);
  const std::size_t d = input.dim(1);
  const std::size_t w = kernels.dim(0);
  const std::size_t m = kernels.dim(2);
  const std::size_t out_len = len - w + 1;

  Tensor out({out_len, m});
  double* o = out.data();
  for (std::size_t t = 0; t < out_len; ++t) {
    std::copy(bias.data(), bias.data() + m, o + t * m);
  }
  // Scatter each input row into the outputs it touches. Zero rows (padding,
  // or fully dropped rows) contribute nothing and are skipped.
  const double* x = input.data();
  const double* k = kernels.data();
  for (std::size_t r = 0; r < len; ++r) {
    const double* row = x + r * d;
    if (row_is_zero(row, d)) continue;
    const std::size_t a_lo = r >= out_len ? r - out_len + 1 : 0;
    const std::size_t a_hi = std::min(w, r + 1);
    for (std::size_t a = a_lo; a < a_hi; ++a) {
      double* orow = o + (r - a) * m;
      const double* ka = k + a * d * m;
      for (std::size_t b = 0; b < d; ++b) {
        const double xv = row[b];
        if (xv == 0.0) continue;
        const double* kab = ka + b * m;
        for (std::size_t j = 0; j < m; ++j) orow[j] += xv * kab[j];
      }
    }
  }
  return out;
}

MaxPoolResult max_over_time(const Tensor& input) {
  if (input.rank() != 2) {
    throw ShapeError("max_over_time: input must be T x m, got " +
                     shape_to_string(input.shape()));
  }
  const std::size_t rows = input.dim(0);
  const std::size_t m = input.dim(1);
  MaxPoolResult result{Tensor({m}), std::vector<std::size_t>(m, 0)};
  for (std::size_t k = 0; k < m; ++k) result.values[k] = input.at(0, k);
  for (std::size_t t = 1; t < rows; ++t) {
    for (std::size_t k = 0; k < m; ++k) {
      const double v = input.at(t, k);
      if (v > result.values[k]) {
        result.values[k] = v;
        result.argmax[k] = t;
      }
    }
  }
  return result;
}

Tensor tanh_map(const Tensor& input) {
  Tensor out(input.shape());
  for (std::size_t i = 0; i < input.size(); ++i) out[i] = std::tanh(input[i]);
  return out;
}

Tensor relu(const Tensor& input) {
  Tensor out(input.shape());
  for (std::size_t i = 0; i < input.size(); ++i) {
    out[i] = input[i] > 0.0 ? input[i] : 0.0;
  }
  return out;
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out(logits.size());
  if (logits.empty()) return out;
  const double top = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - top);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

Tensor softmax(const Tensor& logits) {
  return Tensor(logits.shape(), softmax(logits.values()));
}

double cross_entropy(std::span<const double> probs, std::size_t label) {
  if (label >= probs.size()) {
    throw ValidationError("cross_entropy: label " + std::to_string(label) +
                          " out of range for " + std::to_string(probs.size()) +
                          " classes");
  }
  return -std::log(std::max(probs[label], kProbabilityFloor));
}

void check_dropout_rate(double rate) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw ValidationError("dropout rate must be in [0, 1), got " +
                          std::to_string(rate));
  }
}

std::vector<double> dropout_mask(std::size_t n, double rate, Rng& rng) {
  check_dropout_rate(rate);
  const double keep_scale = 1.0 / (1.0 - rate);
  std::vector<double> mask(n);
  for (auto& v : mask) v = rng.uniform() < rate ? 0.0 : keep_scale;
  return mask;
}

Tensor dropout(const Tensor& input, double rate, Rng& rng, bool training) {
  check_dropout_rate(rate);
  if (!training || rate == 0.0) return input;
  const auto mask = dropout_mask(input.size(), rate, rng);
  Tensor out(input.shape());
  for (std::size_t i = 0; i < input.size(); ++i) out[i] = input[i] * mask[i];
  return out;
}

}  // namespace netab
