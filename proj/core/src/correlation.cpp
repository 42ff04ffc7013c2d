// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "wavesep/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "wavesep/error.hpp"

namespace wavesep {

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) throw ReportError("pearson: sizes differ or are empty");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  return pearson(rx, ry);
}

QuadrantCounts count_quadrants(std::span<const CorrelationPoint> points, const CorrelationPoint& origin) {
  QuadrantCounts q;
  for (const CorrelationPoint& p : points) {
    const double dx = p.j_mean - origin.j_mean;
    const double dy = p.u_mean - origin.u_mean;
    if (dx == 0.0 || dy == 0.0) {
      ++q.on_axis;
    } else if (dx > 0.0) {
      ++(dy > 0.0 ? q.first : q.fourth);
    } else {
      ++(dy > 0.0 ? q.second : q.third);
    }
  }
  return q;
}

CorrelationReport correlation_report(std::vector<CorrelationPoint> points, const CorrelationPoint& origin,
                                     std::string source) {
  if (points.size() < 2) {
    throw ReportError("correlation needs at least 3 variants including the baseline, got " +
                      std::to_string(points.size() + 1));
  }
  std::set<std::string> names{origin.variant};
  for (const CorrelationPoint& p : points) {
    if (!names.insert(p.variant).second) throw ReportError("duplicate variant '" + p.variant + "'");
  }
  CorrelationReport r;
  r.source = std::move(source);
  r.origin = origin;
  r.quadrants = count_quadrants(points, origin);
  std::vector<double> x{origin.j_mean}, y{origin.u_mean};
  for (const CorrelationPoint& p : points) {
    x.push_back(p.j_mean);
    y.push_back(p.u_mean);
  }
  r.pearson = pearson(x, y);
  r.spearman = spearman(x, y);
  r.points = std::move(points);
  return r;
}

CorrelationReport correlation_report(std::span<const VariantPair> pairs, const VariantPair& baseline,
                                     std::string_view source) {
  auto point = [&](const VariantPair& p) {
    return CorrelationPoint{p.variant, p.j.source(source).stats.mean, p.u.source(source).stats.mean};
  };
  std::vector<CorrelationPoint> points;
  for (const VariantPair& p : pairs) points.push_back(point(p));
  return correlation_report(std::move(points), point(baseline), std::string(source));
}

nlohmann::json to_json(const CorrelationReport& r) {
  auto number = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::json pts = nlohmann::json::array();
  for (const CorrelationPoint& p : r.points) pts.push_back({{"variant", p.variant}, {"j_mean", p.j_mean}, {"u_mean", p.u_mean}});
  return {{"source", r.source},
          {"origin", {{"variant", r.origin.variant}, {"j_mean", r.origin.j_mean}, {"u_mean", r.origin.u_mean}}},
          {"points", pts},
          {"quadrants",
           {{"I", r.quadrants.first},
            {"II", r.quadrants.second},
            {"III", r.quadrants.third},
            {"IV", r.quadrants.fourth},
            {"on_axis", r.quadrants.on_axis}}},
          {"pearson", number(r.pearson)},
          {"spearman", number(r.spearman)}};
}

}  // namespace wavesep
