#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "netab/tensor.hpp"

namespace netab {

class Tape;

/// Handle to a node recorded on a Tape.
struct Var {
  std::size_t id = 0;
};

/// Per-batch record of tensor operations for reverse-mode differentiation.
///
/// Nodes are appended in evaluation order, so a reverse sweep over the
/// node list is a valid topological order for backpropagation. A node
/// created with leaf() is bound to an external Tensor; backward()
/// accumulates the node's gradient into that tensor's grad buffer.
class Tape {
 public:
  /// Propagates the node's gradient to its inputs. Only called when the
  /// node received a gradient.
  using BackwardFn = std::function<void(Tape&, std::size_t self)>;

  Var constant(Tensor value);
  Var leaf(Tensor& bound);
  Var push(Tensor value, bool requires_grad, BackwardFn backward);

  const Tensor& value(Var v) const { return nodes_[v.id].value; }
  bool requires_grad(Var v) const { return nodes_[v.id].requires_grad; }

  /// Gradient of the last backward() target with respect to v; empty if v
  /// received none.
  std::span<const double> grad(Var v) const { return nodes_[v.id].grad; }

  /// Mutable gradient accumulator for v, allocated on first use.
  std::span<double> grad_accumulator(Var v);

  /// Seeds d(loss)/d(loss) = 1 and sweeps the tape in reverse.
  void backward(Var scalar_loss);

  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    std::vector<double> grad;
    BackwardFn backward;
    Tensor* bound = nullptr;
    bool requires_grad = false;
  };
  std::vector<Node> nodes_;
};

}  // namespace netab
