#include "netab/ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "netab/errors.hpp"
#include "netab/kernels.hpp"

namespace netab::ops {

Var embedding_lookup(Tape& tape, Tensor& table,
                     std::span<const std::int32_t> ids, bool trainable) {
  if (table.rank() != 2) {
    throw ShapeError("embedding_lookup: table must be |V| x d, got " +
                     shape_to_string(table.shape()));
  }
  if (ids.empty()) throw ShapeError("embedding_lookup: empty id sequence");
  const std::size_t vocab = table.dim(0);
  const std::size_t d = table.dim(1);
  Tensor out({ids.size(), d});
  for (std::size_t t = 0; t < ids.size(); ++t) {
    const auto id = ids[t];
    if (id < 0 || static_cast<std::size_t>(id) >= vocab) {
      throw ShapeError("embedding_lookup: id " + std::to_string(id) +
                       " outside vocabulary of size " + std::to_string(vocab));
    }
    std::copy_n(table.data() + static_cast<std::size_t>(id) * d, d,
                out.data() + t * d);
  }
  std::vector<std::int32_t> kept(ids.begin(), ids.end());
  Tensor* target = &table;
  return tape.push(std::move(out), trainable,
                   [kept = std::move(kept), target, d](Tape& tp, std::size_t self) {
                     const auto g = tp.grad(Var{self});
                     auto tg = target->grad();
                     for (std::size_t t = 0; t < kept.size(); ++t) {
                       if (kept[t] == 0) continue;
                       double* row = tg.data() + static_cast<std::size_t>(kept[t]) * d;
                       const double* src = g.data() + t * d;
                       for (std::size_t b = 0; b < d; ++b) row[b] += src[b];
                     }
                   });
}

Var dropout(Tape& tape, Var x, double rate, Rng& rng, bool training) {
  check_dropout_rate(rate);
  if (!training || rate == 0.0) return x;
  const Tensor& in = tape.value(x);
  auto mask = dropout_mask(in.size(), rate, rng);
  Tensor out(in.shape());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] * mask[i];
  return tape.push(std::move(out), tape.requires_grad(x),
                   [x, mask = std::move(mask)](Tape& tp, std::size_t self) {
                     const auto g = tp.grad(Var{self});
                     auto gx = tp.grad_accumulator(x);
                     for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * mask[i];
                   });
}

Var conv1d_valid(Tape& tape, Var input, Var kernels, Var bias) {
  Tensor out = netab::conv1d_valid(tape.value(input), tape.value(kernels),
                                   tape.value(bias));
  const bool needs = tape.requires_grad(input) || tape.requires_grad(kernels) ||
                     tape.requires_grad(bias);
  return tape.push(std::move(out), needs, [input, kernels, bias](Tape& tp, std::size_t self) {
    const Tensor& x = tp.value(input);
    const Tensor& k = tp.value(kernels);
    const std::size_t d = x.dim(1);
    const std::size_t w = k.dim(0);
    const std::size_t m = k.dim(2);
    const auto g = tp.grad(Var{self});
    const std::size_t out_len = g.size() / m;

    const bool want_x = tp.requires_grad(input);
    const bool want_k = tp.requires_grad(kernels);
    std::span<double> gx, gk;
    if (want_x) gx = tp.grad_accumulator(input);
    if (want_k) gk = tp.grad_accumulator(kernels);
    if (tp.requires_grad(bias)) {
      auto gb = tp.grad_accumulator(bias);
      for (std::size_t t = 0; t < out_len; ++t) {
        for (std::size_t j = 0; j < m; ++j) gb[j] += g[t * m + j];
      }
    }
    for (std::size_t t = 0; t < out_len; ++t) {
      const double* gt = g.data() + t * m;
      // After max-pooling most output rows carry no gradient.
      bool any = false;
      for (std::size_t j = 0; j < m && !any; ++j) any = gt[j] != 0.0;
      if (!any) continue;
      for (std::size_t a = 0; a < w; ++a) {
        const double* xrow = x.data() + (t + a) * d;
        const double* ka = k.data() + a * d * m;
        for (std::size_t b = 0; b < d; ++b) {
          const double* kab = ka + b * m;
          if (want_k && xrow[b] != 0.0) {
            double* gkab = gk.data() + (a * d + b) * m;
            const double xv = xrow[b];
            for (std::size_t j = 0; j < m; ++j) gkab[j] += xv * gt[j];
          }
          if (want_x) {
            double acc = 0.0;
            for (std::size_t j = 0; j < m; ++j) acc += kab[j] * gt[j];
            gx[(t + a) * d + b] += acc;
          }
        }
      }
    }
  });
}

Var relu(Tape& tape, Var x) {
  Tensor out = netab::relu(tape.value(x));
  return tape.push(std::move(out), tape.requires_grad(x), [x](Tape& tp, std::size_t self) {
    const auto g = tp.grad(Var{self});
    const Tensor& in = tp.value(x);
    auto gx = tp.grad_accumulator(x);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (in[i] > 0.0) gx[i] += g[i];
    }
  });
}

MaxPool max_over_time(Tape& tape, Var x) {
  auto pooled = netab::max_over_time(tape.value(x));
  std::vector<std::size_t> argmax = pooled.argmax;
  const std::size_t m = pooled.values.size();
  Var out = tape.push(std::move(pooled.values), tape.requires_grad(x),
                      [x, argmax, m](Tape& tp, std::size_t self) {
                        const auto g = tp.grad(Var{self});
                        auto gx = tp.grad_accumulator(x);
                        for (std::size_t k = 0; k < m; ++k) gx[argmax[k] * m + k] += g[k];
                      });
  return MaxPool{out, std::move(argmax)};
}

Var concat(Tape& tape, std::span<const Var> parts) {
  std::vector<double> joined;
  bool needs = false;
  for (Var p : parts) {
    const auto v = tape.value(p).values();
    joined.insert(joined.end(), v.begin(), v.end());
    needs = needs || tape.requires_grad(p);
  }
  std::vector<Var> inputs(parts.begin(), parts.end());
  return tape.push(Tensor::vector(std::move(joined)), needs,
                   [inputs = std::move(inputs)](Tape& tp, std::size_t self) {
                     const auto g = tp.grad(Var{self});
                     std::size_t offset = 0;
                     for (Var p : inputs) {
                       const std::size_t n = tp.value(p).size();
                       if (tp.requires_grad(p)) {
                         auto gp = tp.grad_accumulator(p);
                         for (std::size_t i = 0; i < n; ++i) gp[i] += g[offset + i];
                       }
                       offset += n;
                     }
                   });
}

Var affine(Tape& tape, Var weight, Var x, Var bias) {
  const Tensor& w = tape.value(weight);
  const Tensor& xv = tape.value(x);
  const Tensor& b = tape.value(bias);
  if (w.rank() != 2 || w.dim(1) != xv.size() || b.size() != w.dim(0)) {
    throw ShapeError("affine: weight " + shape_to_string(w.shape()) +
                     " incompatible with input " + shape_to_string(xv.shape()) +
                     " and bias " + shape_to_string(b.shape()));
  }
  const std::size_t rows = w.dim(0);
  const std::size_t cols = w.dim(1);
  Tensor out({rows});
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = b[r];
    for (std::size_t c = 0; c < cols; ++c) acc += w.at(r, c) * xv[c];
    out[r] = acc;
  }
  const bool needs = tape.requires_grad(weight) || tape.requires_grad(x) ||
                     tape.requires_grad(bias);
  return tape.push(std::move(out), needs, [weight, x, bias, rows, cols](Tape& tp, std::size_t self) {
    const auto g = tp.grad(Var{self});
    const Tensor& w = tp.value(weight);
    const Tensor& xv = tp.value(x);
    if (tp.requires_grad(bias)) {
      auto gb = tp.grad_accumulator(bias);
      for (std::size_t r = 0; r < rows; ++r) gb[r] += g[r];
    }
    if (tp.requires_grad(weight)) {
      auto gw = tp.grad_accumulator(weight);
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) gw[r * cols + c] += g[r] * xv[c];
      }
    }
    if (tp.requires_grad(x)) {
      auto gx = tp.grad_accumulator(x);
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) gx[c] += g[r] * w.at(r, c);
      }
    }
  });
}

Var tanh_map(Tape& tape, Var x) {
  Tensor out = netab::tanh_map(tape.value(x));
  return tape.push(std::move(out), tape.requires_grad(x), [x](Tape& tp, std::size_t self) {
    const auto g = tp.grad(Var{self});
    const Tensor& y = tp.value(Var{self});
    auto gx = tp.grad_accumulator(x);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * (1.0 - y[i] * y[i]);
  });
}

Var hadamard(Tape& tape, Var a, Var b) {
  const Tensor& av = tape.value(a);
  const Tensor& bv = tape.value(b);
  if (av.shape() != bv.shape()) {
    throw ShapeError("hadamard: " + shape_to_string(av.shape()) + " vs " +
                     shape_to_string(bv.shape()));
  }
  Tensor out(av.shape());
  for (std::size_t i = 0; i < av.size(); ++i) out[i] = av[i] * bv[i];
  const bool needs = tape.requires_grad(a) || tape.requires_grad(b);
  return tape.push(std::move(out), needs, [a, b](Tape& tp, std::size_t self) {
    const auto g = tp.grad(Var{self});
    const Tensor& av = tp.value(a);
    const Tensor& bv = tp.value(b);
    if (tp.requires_grad(a)) {
      auto ga = tp.grad_accumulator(a);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * bv[i];
    }
    if (tp.requires_grad(b)) {
      auto gb = tp.grad_accumulator(b);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * av[i];
    }
  });
}

Var softmax(Tape& tape, Var logits) {
  Tensor out = netab::softmax(tape.value(logits));
  return tape.push(std::move(out), tape.requires_grad(logits), [logits](Tape& tp, std::size_t self) {
    const auto g = tp.grad(Var{self});
    const Tensor& y = tp.value(Var{self});
    double dot = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) dot += g[i] * y[i];
    auto gx = tp.grad_accumulator(logits);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += y[i] * (g[i] - dot);
  });
}

Var stack_rows(Tape& tape, std::span<const Var> rows) {
  const std::size_t c = rows.size();
  std::vector<double> entries;
  entries.reserve(c * c);
  bool needs = false;
  for (Var r : rows) {
    const Tensor& v = tape.value(r);
    if (v.size() != c) {
      throw ShapeError("stack_rows: expected rows of length " +
                       std::to_string(c) + ", got " + shape_to_string(v.shape()));
    }
    entries.insert(entries.end(), v.values().begin(), v.values().end());
    needs = needs || tape.requires_grad(r);
  }
  std::vector<Var> inputs(rows.begin(), rows.end());
  return tape.push(Tensor::matrix(c, c, std::move(entries)), needs,
                   [inputs = std::move(inputs), c](Tape& tp, std::size_t self) {
                     const auto g = tp.grad(Var{self});
                     for (std::size_t i = 0; i < c; ++i) {
                       if (!tp.requires_grad(inputs[i])) continue;
                       auto gr = tp.grad_accumulator(inputs[i]);
                       for (std::size_t j = 0; j < c; ++j) gr[j] += g[i * c + j];
                     }
                   });
}

Var mixture(Tape& tape, Var p, Var q) {
  const Tensor& pv = tape.value(p);
  const Tensor& qv = tape.value(q);
  const std::size_t c = pv.size();
  qv.expect_shape({c, c}, "mixture: transition matrix");
  Tensor out({c});
  for (std::size_t j = 0; j < c; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < c; ++i) acc += qv.at(i, j) * pv[i];
    out[j] = acc;
  }
  const bool needs = tape.requires_grad(p) || tape.requires_grad(q);
  return tape.push(std::move(out), needs, [p, q, c](Tape& tp, std::size_t self) {
    const auto g = tp.grad(Var{self});
    const Tensor& pv = tp.value(p);
    const Tensor& qv = tp.value(q);
    if (tp.requires_grad(p)) {
      auto gp = tp.grad_accumulator(p);
      for (std::size_t i = 0; i < c; ++i) {
        for (std::size_t j = 0; j < c; ++j) gp[i] += qv.at(i, j) * g[j];
      }
    }
    if (tp.requires_grad(q)) {
      auto gq = tp.grad_accumulator(q);
      for (std::size_t i = 0; i < c; ++i) {
        for (std::size_t j = 0; j < c; ++j) gq[i * c + j] += pv[i] * g[j];
      }
    }
  });
}

Var cross_entropy(Tape& tape, Var probs, std::size_t label) {
  const Tensor& pv = tape.value(probs);
  const double loss = netab::cross_entropy(pv.values(), label);
  return tape.push(Tensor::vector({loss}), tape.requires_grad(probs),
                   [probs, label](Tape& tp, std::size_t self) {
                     const double g = tp.grad(Var{self})[0];
                     const double p = tp.value(probs)[label];
                     if (p < kProbabilityFloor) return;  // clamped: flat
                     tp.grad_accumulator(probs)[label] += -g / p;
                   });
}

Var mean(Tape& tape, std::span<const Var> scalars) {
  if (scalars.empty()) throw ShapeError("mean: no inputs");
  double total = 0.0;
  bool needs = false;
  for (Var s : scalars) {
    total += tape.value(s)[0];
    needs = needs || tape.requires_grad(s);
  }
  const double n = static_cast<double>(scalars.size());
  std::vector<Var> inputs(scalars.begin(), scalars.end());
  return tape.push(Tensor::vector({total / n}), needs,
                   [inputs = std::move(inputs), n](Tape& tp, std::size_t self) {
                     const double g = tp.grad(Var{self})[0] / n;
                     for (Var s : inputs) {
                       if (tp.requires_grad(s)) tp.grad_accumulator(s)[0] += g;
                     }
                   });
}

}  // namespace netab::ops
