#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "netab/rng.hpp"

namespace netab {

/// Evaluates a scalar loss at `params`. When `grad` is non-empty it must be
/// filled with the analytic gradient (same length as params).
using LossAndGradient =
    std::function<double(std::span<const double> params, std::span<double> grad)>;

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t probes = 0;
};

/// |a - n| / max(|a|, |n|, 1e-8).
double relative_error(double analytic, double numeric);

/// Central finite differences at the given coordinates.
GradCheckReport grad_check_at(const LossAndGradient& loss,
                              std::span<const double> params,
                              std::span<const std::size_t> coordinates,
                              double epsilon);

/// Central finite differences on `probe_count` coordinates drawn uniformly
/// (with replacement) by `rng`; returns the largest relative error.
double grad_check(const LossAndGradient& loss, std::span<const double> params,
                  std::size_t probe_count, double epsilon, Rng& rng);

}  // namespace netab
