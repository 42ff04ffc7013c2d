// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace wavesep {

// Multichannel time series, one row per channel. Row-major so that each
// channel's samples are contiguous.
using Signal = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// A waveform with shape [channels, samples].
using Waveform = Signal;

// Keeps samples 0, 2, 4, ... of every channel. Throws ShapeError on odd length.
Signal decimate(const Signal& x);
std::vector<double> decimate(std::span<const double> x);

// Adjoint of decimate: scatters the gradient back onto the even samples.
Signal decimate_backward(const Signal& grad_out);

// Doubles the length with linear interpolation between neighbours and edge
// replication at the end: out[2i] = x[i], out[2i+1] = (x[i] + x[i+1]) / 2,
// out[2T-1] = x[T-1]. Throws ShapeError on empty input.
Signal upsample_linear(const Signal& x);
std::vector<double> upsample_linear(std::span<const double> x);

Signal upsample_linear_backward(const Signal& grad_out);

// Stacks signals of equal length along the channel axis.
Signal concat_channels(std::span<const Signal* const> parts);

}  // namespace wavesep
