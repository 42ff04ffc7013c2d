// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include "wavesep/parameters.hpp"
#include "wavesep/signal.hpp"

namespace wavesep {

enum class Activation { kNone, kLeakyRelu, kTanh };

inline constexpr double kLeakySlope = 0.2;

// A 1-D convolution with symmetric zero padding (output length == input
// length) followed by an activation. Weight shape [out, in, kernel].
struct ConvLayer {
  std::size_t weight = 0;
  std::size_t bias = 0;
  int in_channels = 0;
  int out_channels = 0;
  int kernel = 1;
  Activation activation = Activation::kNone;
};

// Reverse-mode differentiation over the handful of ops the separators use.
// Values are recorded as the forward pass runs; backward() replays the ops in
// reverse and accumulates parameter gradients for trainable arrays only.
class Tape {
 public:
  using Node = int;

  // With record == false no backward caches are kept and backward() is
  // unavailable. `trainable` is indexed like `params`; an empty span means
  // nothing is trainable.
  Tape(std::span<const ParamArray> params, std::vector<bool> trainable, bool record = true);

  Node input(Signal value, bool requires_grad = false);
  Node conv(Node x, const ConvLayer& layer);
  Node decimate(Node x);
  Node upsample(Node x);
  Node concat(std::span<const Node> parts);
  Node concat(std::initializer_list<Node> parts) {
    return concat(std::span<const Node>(parts.begin(), parts.size()));
  }
  Node slice(Node x, Eigen::Index first_row, Eigen::Index rows);
  // head holds K-1 predicted sources of `channels` rows each; the K-th source
  // is mix minus their sum.
  Node difference_output(Node head, Node mix, int num_sources);

  const Signal& value(Node n) const { return nodes_[static_cast<std::size_t>(n)].value; }
  bool requires_grad(Node n) const { return nodes_[static_cast<std::size_t>(n)].requires_grad; }
  std::size_t size() const { return nodes_.size(); }

  // Seeds d(loss)/d(node). May be called for several nodes before backward().
  void add_gradient(Node n, const Signal& grad);
  void backward(ParamGrads& grads);
  // Gradient reaching a node after backward(); zero-size if none arrived.
  const Signal& gradient(Node n) const { return nodes_[static_cast<std::size_t>(n)].grad; }

 private:
  struct Record {
    Signal value;
    Signal grad;
    bool requires_grad = false;
    std::function<void(Tape&, ParamGrads&, Node self)> backward;
  };

  bool param_trainable(std::size_t index) const {
    return index < trainable_.size() && trainable_[index];
  }
  Node push(Signal value, bool requires_grad);
  void accumulate(Node n, const Signal& grad);

  std::span<const ParamArray> params_;
  std::vector<bool> trainable_;
  bool record_;
  std::vector<Record> nodes_;
};

// Stand-alone convolution forward used by code that does not need gradients.
Signal conv_forward(const ConvLayer& layer, std::span<const ParamArray> params, const Signal& x);

}  // namespace wavesep
