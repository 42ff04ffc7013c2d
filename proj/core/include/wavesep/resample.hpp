// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include "wavesep/signal.hpp"

namespace wavesep {

// Band-limited sample-rate conversion (Hann-windowed sinc, 32 zero crossings
// per side). Output length is round(N * to / from). Throws DataError on
// non-positive rates.
Waveform resample(const Waveform& x, int from_rate, int to_rate);

}  // namespace wavesep
