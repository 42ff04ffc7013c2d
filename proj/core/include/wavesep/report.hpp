// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "wavesep/correlation.hpp"
#include "wavesep/evaluate.hpp"

namespace wavesep {

// One row per model: Med. / MAD / Mean / SD for each source.
std::string results_table_csv(std::span<const EvalReport> reports);
std::string results_table_text(std::span<const EvalReport> reports);

std::string correlation_points_csv(const CorrelationReport& report);

// Scatter of (J mean, U mean) with crosshairs through the baseline.
std::string scatter_svg(const CorrelationReport& report);

// Writes through a temporary file and a rename. Throws IoError.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_text(const std::filesystem::path& path);

}  // namespace wavesep
