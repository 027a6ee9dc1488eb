#include "netab/tape.hpp"

#include <algorithm>

#include "netab/errors.hpp"

namespace netab {

Var Tape::constant(Tensor value) {
  nodes_.push_back(Node{std::move(value), {}, {}, nullptr, false});
  return Var{nodes_.size() - 1};
}

Var Tape::leaf(Tensor& bound) {
  nodes_.push_back(Node{bound, {}, {}, &bound, true});
  nodes_.back().value.drop_grad();
  return Var{nodes_.size() - 1};
}

Var Tape::push(Tensor value, bool requires_grad, BackwardFn backward) {
  nodes_.push_back(Node{std::move(value), {}, requires_grad ? std::move(backward) : BackwardFn{},
                        nullptr, requires_grad});
  return Var{nodes_.size() - 1};
}

std::span<double> Tape::grad_accumulator(Var v) {
  auto& node = nodes_[v.id];
  if (node.grad.empty()) node.grad.assign(node.value.size(), 0.0);
  return node.grad;
}

void Tape::backward(Var scalar_loss) {
  if (value(scalar_loss).size() != 1) {
    throw ShapeError("backward: loss must be a scalar, got " +
                     shape_to_string(value(scalar_loss).shape()));
  }
  for (auto& node : nodes_) std::fill(node.grad.begin(), node.grad.end(), 0.0);
  grad_accumulator(scalar_loss)[0] = 1.0;
  for (std::size_t i = scalar_loss.id + 1; i-- > 0;) {
    auto& node = nodes_[i];
    if (node.grad.empty() || !node.requires_grad) continue;
    if (node.backward) node.backward(*this, i);
    if (node.bound != nullptr) {
      auto target = node.bound->grad();
      for (std::size_t j = 0; j < target.size(); ++j) target[j] += node.grad[j];
    }
  }
}

}  // namespace netab
