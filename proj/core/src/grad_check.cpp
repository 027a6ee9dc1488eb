#include "netab/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "netab/errors.hpp"

namespace netab {

double relative_error(double analytic, double numeric) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
  return std::abs(analytic - numeric) / scale;
}

GradCheckReport grad_check_at(const LossAndGradient& loss,
                              std::span<const double> params,
                              std::span<const std::size_t> coordinates,
                              double epsilon) {
  std::vector<double> point(params.begin(), params.end());
  std::vector<double> analytic(point.size(), 0.0);
  loss(point, analytic);

  GradCheckReport report;
  for (std::size_t index : coordinates) {
    if (index >= point.size()) {
      throw ShapeError("grad_check: coordinate " + std::to_string(index) +
                       " outside " + std::to_string(point.size()) + " parameters");
    }
    const double saved = point[index];
    point[index] = saved + epsilon;
    const double up = loss(point, {});
    point[index] = saved - epsilon;
    const double down = loss(point, {});
    point[index] = saved;

    const double numeric = (up - down) / (2.0 * epsilon);
    const double err = relative_error(analytic[index], numeric);
    if (report.probes == 0 || err > report.max_relative_error) {
      report.max_relative_error = err;
      report.worst_index = index;
      report.worst_analytic = analytic[index];
      report.worst_numeric = numeric;
    }
    ++report.probes;
  }
  return report;
}

double grad_check(const LossAndGradient& loss, std::span<const double> params,
                  std::size_t probe_count, double epsilon, Rng& rng) {
  if (params.empty()) return 0.0;
  std::vector<std::size_t> coords(probe_count);
  for (auto& c : coords) c = rng.below(params.size());
  return grad_check_at(loss, params, coords, epsilon).max_relative_error;
}

}  // namespace netab
