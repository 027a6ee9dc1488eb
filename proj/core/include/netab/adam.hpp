#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "netab/tensor.hpp"

namespace netab {

struct AdamState {
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::uint64_t step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// One bias-corrected Adam update of `params` in place.
///
/// Moments are sized on first use. Throws NumericalError naming `block` if
/// any gradient entry is not finite; params and state are untouched then.
void adam_step(Tensor& params, std::span<const double> grads, AdamState& state,
               double lr, std::string_view block = "params");

}  // namespace netab
