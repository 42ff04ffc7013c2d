// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "wavesep/signal.hpp"

#include <string>

#include "wavesep/error.hpp"

namespace wavesep {

Signal decimate(const Signal& x) {
  if (x.cols() % 2 != 0) {
    throw ShapeError("decimate: length " + std::to_string(x.cols()) + " is odd");
  }
  const Eigen::Index half = x.cols() / 2;
  Signal out(x.rows(), half);
  for (Eigen::Index c = 0; c < x.rows(); ++c) {
    for (Eigen::Index t = 0; t < half; ++t) out(c, t) = x(c, 2 * t);
  }
  return out;
}

std::vector<double> decimate(std::span<const double> x) {
  Signal row = Eigen::Map<const Signal>(x.data(), 1, static_cast<Eigen::Index>(x.size()));
  Signal out = decimate(row);
  return {out.data(), out.data() + out.size()};
}

Signal decimate_backward(const Signal& grad_out) {
  Signal grad_in = Signal::Zero(grad_out.rows(), grad_out.cols() * 2);
  for (Eigen::Index c = 0; c < grad_out.rows(); ++c) {
    for (Eigen::Index t = 0; t < grad_out.cols(); ++t) grad_in(c, 2 * t) = grad_out(c, t);
  }
  return grad_in;
}

Signal upsample_linear(const Signal& x) {
  const Eigen::Index n = x.cols();
  if (n == 0) throw ShapeError("upsample_linear: empty input");
  Signal out(x.rows(), 2 * n);
  for (Eigen::Index c = 0; c < x.rows(); ++c) {
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      out(c, 2 * i) = x(c, i);
      out(c, 2 * i + 1) = 0.5 * (x(c, i) + x(c, i + 1));
    }
    out(c, 2 * n - 2) = x(c, n - 1);
    out(c, 2 * n - 1) = x(c, n - 1);
  }
  return out;
}

std::vector<double> upsample_linear(std::span<const double> x) {
  Signal row = Eigen::Map<const Signal>(x.data(), 1, static_cast<Eigen::Index>(x.size()));
  Signal out = upsample_linear(row);
  return {out.data(), out.data() + out.size()};
}

Signal upsample_linear_backward(const Signal& grad_out) {
  const Eigen::Index n = grad_out.cols() / 2;
  Signal grad_in = Signal::Zero(grad_out.rows(), n);
  for (Eigen::Index c = 0; c < grad_out.rows(); ++c) {
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      grad_in(c, i) += grad_out(c, 2 * i) + 0.5 * grad_out(c, 2 * i + 1);
      grad_in(c, i + 1) += 0.5 * grad_out(c, 2 * i + 1);
    }
    grad_in(c, n - 1) += grad_out(c, 2 * n - 2) + grad_out(c, 2 * n - 1);
  }
  return grad_in;
}

Signal concat_channels(std::span<const Signal* const> parts) {
  Eigen::Index rows = 0;
  const Eigen::Index cols = parts.empty() ? 0 : parts.front()->cols();
  for (const Signal* p : parts) {
    if (p->cols() != cols) throw ShapeError("concat_channels: length mismatch");
    rows += p->rows();
  }
  Signal out(rows, cols);
  Eigen::Index r = 0;
  for (const Signal* p : parts) {
    out.middleRows(r, p->rows()) = *p;
    r += p->rows();
  }
  return out;
}

}  // namespace wavesep
