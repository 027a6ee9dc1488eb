#include "netab/adam.hpp"

#include <cmath>
#include <string>

#include "netab/errors.hpp"

namespace netab {

void adam_step(Tensor& params, std::span<const double> grads, AdamState& state,
               double lr, std::string_view block) {
  const std::size_t n = params.size();
  if (grads.size() != n) {
    throw ShapeError("adam_step(" + std::string(block) + "): " +
                     std::to_string(grads.size()) + " gradients for " +
                     std::to_string(n) + " parameters");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(grads[i])) {
      throw NumericalError("adam_step: non-finite gradient in parameter block '" +
                           std::string(block) + "' at index " + std::to_string(i));
    }
  }
  if (state.first_moment.size() != n) state.first_moment.assign(n, 0.0);
  if (state.second_moment.size() != n) state.second_moment.assign(n, 0.0);

  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(state.beta1, t);
  const double correction2 = 1.0 - std::pow(state.beta2, t);
  auto p = params.values();
  for (std::size_t i = 0; i < n; ++i) {
    const double g = grads[i];
    double& m = state.first_moment[i];
    double& v = state.second_moment[i];
    m = state.beta1 * m + (1.0 - state.beta1) * g;
    v = state.beta2 * v + (1.0 - state.beta2) * g * g;
    const double m_hat = m / correction1;
    const double v_hat = v / correction2;
    p[i] -= lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
  }
}

}  // namespace netab
