// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "wavesep/evaluate.hpp"

namespace wavesep {

struct CorrelationPoint {
  std::string variant;
  double j_mean = 0.0;  // x
  double u_mean = 0.0;  // y
};

struct QuadrantCounts {
  int first = 0;   // x > 0, y > 0 relative to the origin
  int second = 0;  // x < 0, y > 0
  int third = 0;   // x < 0, y < 0
  int fourth = 0;  // x > 0, y < 0
  int on_axis = 0;
};

struct CorrelationReport {
  std::string source;
  std::vector<CorrelationPoint> points;  // non-baseline variants
  CorrelationPoint origin;
  QuadrantCounts quadrants;
  double pearson = 0.0;   // NaN when either coordinate has no spread
  double spearman = 0.0;  // average ranks for ties
};

struct VariantPair {
  std::string variant;
  EvalReport j;
  EvalReport u;
};

double pearson(std::span<const double> x, std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);
// 1-based ranks, ties share their average rank.
std::vector<double> average_ranks(std::span<const double> values);

QuadrantCounts count_quadrants(std::span<const CorrelationPoint> points, const CorrelationPoint& origin);

// Quadrants count the non-baseline points; the coefficients use every point
// including the baseline. Throws ReportError on fewer than 3 variants in
// total or on duplicate variant names.
CorrelationReport correlation_report(std::vector<CorrelationPoint> points, const CorrelationPoint& origin,
                                     std::string source = "vocals");
CorrelationReport correlation_report(std::span<const VariantPair> pairs, const VariantPair& baseline,
                                     std::string_view source = "vocals");

nlohmann::json to_json(const CorrelationReport& report);

}  // namespace wavesep
