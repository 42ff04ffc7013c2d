// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "wavesep/tape.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "wavesep/error.hpp"

namespace wavesep {
namespace {

using RowMatrix = Signal;
using ConstMap = Eigen::Map<const RowMatrix>;
using MutableMap = Eigen::Map<RowMatrix>;

// Column matrix with row (c * kernel + k) holding channel c shifted by k - pad.
RowMatrix im2col(const Signal& x, int kernel) {
  const Eigen::Index channels = x.rows();
  const Eigen::Index length = x.cols();
  const int pad = kernel / 2;
  RowMatrix cols = RowMatrix::Zero(channels * kernel, length);
  for (Eigen::Index c = 0; c < channels; ++c) {
    for (int k = 0; k < kernel; ++k) {
      const Eigen::Index shift = k - pad;
      const Eigen::Index dst = std::max<Eigen::Index>(0, -shift);
      const Eigen::Index src = std::max<Eigen::Index>(0, shift);
      const Eigen::Index len = length - std::abs(shift);
      if (len <= 0) continue;
      cols.row(c * kernel + k).segment(dst, len) = x.row(c).segment(src, len);
    }
  }
  return cols;
}

Signal col2im(const RowMatrix& cols, Eigen::Index channels, int kernel) {
  const Eigen::Index length = cols.cols();
  const int pad = kernel / 2;
  Signal x = Signal::Zero(channels, length);
  for (Eigen::Index c = 0; c < channels; ++c) {
    for (int k = 0; k < kernel; ++k) {
      const Eigen::Index shift = k - pad;
      const Eigen::Index dst = std::max<Eigen::Index>(0, -shift);
      const Eigen::Index src = std::max<Eigen::Index>(0, shift);
      const Eigen::Index len = length - std::abs(shift);
      if (len <= 0) continue;
      x.row(c).segment(src, len) += cols.row(c * kernel + k).segment(dst, len);
    }
  }
  return x;
}

void check_conv_input(const ConvLayer& layer, const Signal& x) {
  if (x.rows() != layer.in_channels) {
    throw ShapeError("conv: expected " + std::to_string(layer.in_channels) +
                     " input channels, got " + std::to_string(x.rows()));
  }
}

Signal apply_activation(Signal pre, Activation act) {
  switch (act) {
    case Activation::kNone: break;
    case Activation::kLeakyRelu:
      pre = pre.unaryExpr([](double v) { return v > 0.0 ? v : kLeakySlope * v; });
      break;
    case Activation::kTanh: pre = pre.array().tanh().matrix(); break;
  }
  return pre;
}

// Gradient through the activation, expressed with the activation output.
Signal activation_backward(const Signal& out, const Signal& grad, Activation act) {
  switch (act) {
    case Activation::kNone: return grad;
    case Activation::kLeakyRelu:
      return grad.binaryExpr(out, [](double g, double y) { return y > 0.0 ? g : kLeakySlope * g; });
    case Activation::kTanh:
      return grad.binaryExpr(out, [](double g, double y) { return g * (1.0 - y * y); });
  }
  return grad;
}

Signal conv_from_cols(const ConvLayer& layer, std::span<const ParamArray> params,
                      const RowMatrix& cols) {
  const ConstMap weight(params[layer.weight].values.data(), layer.out_channels,
                        static_cast<Eigen::Index>(layer.in_channels) * layer.kernel);
  const Eigen::Map<const Eigen::VectorXd> bias(params[layer.bias].values.data(), layer.out_channels);
  Signal pre = weight * cols;
  pre.colwise() += bias;
  return apply_activation(std::move(pre), layer.activation);
}

}  // namespace

Signal conv_forward(const ConvLayer& layer, std::span<const ParamArray> params, const Signal& x) {
  check_conv_input(layer, x);
  if (layer.kernel == 1) {
    return conv_from_cols(layer, params, x);
  }
  return conv_from_cols(layer, params, im2col(x, layer.kernel));
}

Tape::Tape(std::span<const ParamArray> params, std::vector<bool> trainable, bool record)
    : params_(params), trainable_(std::move(trainable)), record_(record) {}

Tape::Node Tape::push(Signal value, bool requires_grad) {
  Record r;
  r.value = std::move(value);
  r.requires_grad = record_ && requires_grad;
  nodes_.push_back(std::move(r));
  return static_cast<Node>(nodes_.size() - 1);
}

void Tape::accumulate(Node n, const Signal& grad) {
  Record& r = nodes_[static_cast<std::size_t>(n)];
  if (!r.requires_grad) return;
  if (r.grad.size() == 0) {
    r.grad = grad;
  } else {
    r.grad += grad;
  }
}

Tape::Node Tape::input(Signal value, bool requires_grad) {
  return push(std::move(value), requires_grad);
}

Tape::Node Tape::conv(Node x, const ConvLayer& layer) {
  const Signal& in = value(x);
  check_conv_input(layer, in);
  const bool train_weight = param_trainable(layer.weight);
  const bool train_bias = param_trainable(layer.bias);
  const bool needs_grad = record_ && (requires_grad(x) || train_weight || train_bias);
  RowMatrix cols = layer.kernel == 1 ? in : im2col(in, layer.kernel);
  Signal out = conv_from_cols(layer, params_, cols);
  const Node self = push(std::move(out), needs_grad);
  if (!needs_grad) return self;

  if (!train_weight) cols.resize(0, 0);  // only dW needs the column matrix
  nodes_[static_cast<std::size_t>(self)].backward =
      [layer, x, train_weight, train_bias, cols = std::move(cols)](Tape& tape, ParamGrads& grads,
                                                                   Node node) {
        const Signal local =
            activation_backward(tape.value(node), tape.gradient(node), layer.activation);
        const Eigen::Index fan = static_cast<Eigen::Index>(layer.in_channels) * layer.kernel;
        if (train_weight) {
          MutableMap dw(grads[layer.weight].data(), layer.out_channels, fan);
          dw.noalias() += local * cols.transpose();
        }
        if (train_bias) {
          Eigen::Map<Eigen::VectorXd> db(grads[layer.bias].data(), layer.out_channels);
          db += local.rowwise().sum();
        }
        if (tape.requires_grad(x)) {
          const ConstMap weight(tape.params_[layer.weight].values.data(), layer.out_channels, fan);
          RowMatrix dcols = weight.transpose() * local;
          if (layer.kernel == 1) {
            tape.accumulate(x, dcols);
          } else {
            tape.accumulate(x, col2im(dcols, layer.in_channels, layer.kernel));
          }
        }
      };
  return self;
}

Tape::Node Tape::decimate(Node x) {
  const Node self = push(wavesep::decimate(value(x)), requires_grad(x));
  if (requires_grad(self)) {
    nodes_[static_cast<std::size_t>(self)].backward = [x](Tape& tape, ParamGrads&, Node node) {
      tape.accumulate(x, decimate_backward(tape.gradient(node)));
    };
  }
  return self;
}

Tape::Node Tape::upsample(Node x) {
  const Node self = push(upsample_linear(value(x)), requires_grad(x));
  if (requires_grad(self)) {
    nodes_[static_cast<std::size_t>(self)].backward = [x](Tape& tape, ParamGrads&, Node node) {
      tape.accumulate(x, upsample_linear_backward(tape.gradient(node)));
    };
  }
  return self;
}

Tape::Node Tape::concat(std::span<const Node> parts) {
  std::vector<const Signal*> values;
  bool needs_grad = false;
  for (Node p : parts) {
    values.push_back(&value(p));
    needs_grad = needs_grad || requires_grad(p);
  }
  const Node self = push(concat_channels(values), needs_grad);
  if (requires_grad(self)) {
    std::vector<Node> inputs(parts.begin(), parts.end());
    nodes_[static_cast<std::size_t>(self)].backward = [inputs](Tape& tape, ParamGrads&, Node node) {
      const Signal& grad = tape.gradient(node);
      Eigen::Index row = 0;
      for (Node p : inputs) {
        const Eigen::Index rows = tape.value(p).rows();
        if (tape.requires_grad(p)) tape.accumulate(p, grad.middleRows(row, rows));
        row += rows;
      }
    };
  }
  return self;
}

Tape::Node Tape::slice(Node x, Eigen::Index first_row, Eigen::Index rows) {
  const Signal& in = value(x);
  if (first_row < 0 || rows < 0 || first_row + rows > in.rows()) {
    throw ShapeError("slice: rows [" + std::to_string(first_row) + ", " +
                     std::to_string(first_row + rows) + ") out of range for " +
                     std::to_string(in.rows()) + " channels");
  }
  const Eigen::Index total = in.rows();
  const Node self = push(in.middleRows(first_row, rows), requires_grad(x));
  if (requires_grad(self)) {
    nodes_[static_cast<std::size_t>(self)].backward =
        [x, first_row, rows, total](Tape& tape, ParamGrads&, Node node) {
          const Signal& grad = tape.gradient(node);
          Signal full = Signal::Zero(total, grad.cols());
          full.middleRows(first_row, rows) = grad;
          tape.accumulate(x, full);
        };
  }
  return self;
}

Tape::Node Tape::difference_output(Node head, Node mix, int num_sources) {
  const Signal& h = value(head);
  const Signal& m = value(mix);
  const Eigen::Index channels = m.rows();
  if (num_sources < 2 || h.rows() != channels * (num_sources - 1) || h.cols() != m.cols()) {
    throw ShapeError("difference_output: head has " + std::to_string(h.rows()) +
                     " rows, expected " + std::to_string(channels * (num_sources - 1)));
  }
  Signal out(channels * num_sources, m.cols());
  out.topRows(h.rows()) = h;
  Signal last = m;
  for (int k = 0; k + 1 < num_sources; ++k) last -= h.middleRows(k * channels, channels);
  out.bottomRows(channels) = last;
  const Node self = push(std::move(out), requires_grad(head) || requires_grad(mix));
  if (requires_grad(self)) {
    nodes_[static_cast<std::size_t>(self)].backward =
        [head, mix, channels, num_sources](Tape& tape, ParamGrads&, Node node) {
          const Signal& grad = tape.gradient(node);
          const Signal last = grad.bottomRows(channels);
          if (tape.requires_grad(head)) {
            Signal gh = grad.topRows(channels * (num_sources - 1));
            for (int k = 0; k + 1 < num_sources; ++k) gh.middleRows(k * channels, channels) -= last;
            tape.accumulate(head, gh);
          }
          if (tape.requires_grad(mix)) tape.accumulate(mix, last);
        };
  }
  return self;
}

void Tape::add_gradient(Node n, const Signal& grad) {
  const Signal& v = value(n);
  if (grad.rows() != v.rows() || grad.cols() != v.cols()) {
    throw ShapeError("add_gradient: gradient shape does not match node value");
  }
  accumulate(n, grad);
}

void Tape::backward(ParamGrads& grads) {
  if (!record_) throw ContractError("backward() on a tape created without recording");
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    Record& r = nodes_[i];
    if (!r.requires_grad || !r.backward || r.grad.size() == 0) continue;
    r.backward(*this, grads, static_cast<Node>(i));
  }
}

}  // namespace wavesep
