// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "wavesep/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wavesep/error.hpp"

namespace wavesep {
namespace {

std::string fixed(double v, int digits = 4) {
  if (!std::isfinite(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string results_table_csv(std::span<const EvalReport> reports) {
  std::ostringstream os;
  os << "model,regime,stages,metric";
  for (auto name : kStemNames) {
    os << ',' << name << "_median," << name << "_mad," << name << "_mean," << name << "_sd," << name
       << "_segments," << name << "_excluded";
  }
  os << '\n';
  for (const EvalReport& r : reports) {
    os << csv_field(r.model) << ',' << r.regime << ',' << r.stages << ',' << r.metric;
    for (auto name : kStemNames) {
      const SourceReport& s = r.source(name);
      os << ',' << fixed(s.stats.median) << ',' << fixed(s.stats.mad) << ',' << fixed(s.stats.mean) << ','
         << fixed(s.stats.sd) << ',' << s.stats.count << ',' << s.excluded;
    }
    os << '\n';
  }
  return os.str();
}

std::string results_table_text(std::span<const EvalReport> reports) {
  std::size_t width = 5;
  for (const EvalReport& r : reports) width = std::max(width, r.model.size() + 3);
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.insert(0, w - s.size(), ' ');
    return s;
  };
  std::ostringstream os;
  os << pad("", width);
  for (auto name : kStemNames) os << " | " << pad(std::string(name), 31);
  os << '\n' << pad("Model", width);
  for (std::size_t k = 0; k < kStemNames.size(); ++k) {
    os << " | " << pad("Med.", 7) << pad("MAD", 8) << pad("Mean", 8) << pad("SD", 8);
  }
  os << '\n';
  for (const EvalReport& r : reports) {
    std::string label = r.model;
    if (r.stages > 1) label += " x" + std::to_string(r.stages);
    os << pad(label, width);
    for (auto name : kStemNames) {
      const Stats& s = r.source(name).stats;
      os << " | " << pad(fixed(s.median, 2), 7) << pad(fixed(s.mad, 2), 8) << pad(fixed(s.mean, 2), 8)
         << pad(fixed(s.sd, 2), 8);
    }
    os << '\n';
  }
  os << "(projection SDR in dB over one-second segments)\n";
  return os.str();
}

std::string correlation_points_csv(const CorrelationReport& report) {
  std::ostringstream os;
  os << "variant,j_mean,u_mean,baseline\n";
  os << csv_field(report.origin.variant) << ',' << fixed(report.origin.j_mean, 6) << ','
     << fixed(report.origin.u_mean, 6) << ",1\n";
  for (const CorrelationPoint& p : report.points) {
    os << csv_field(p.variant) << ',' << fixed(p.j_mean, 6) << ',' << fixed(p.u_mean, 6) << ",0\n";
  }
  return os.str();
}

std::string scatter_svg(const CorrelationReport& report) {
  constexpr double kWidth = 560, kHeight = 480, kLeft = 70, kRight = 30, kTop = 50, kBottom = 60;
  double xmin = report.origin.j_mean, xmax = xmin, ymin = report.origin.u_mean, ymax = ymin;
  for (const CorrelationPoint& p : report.points) {
    xmin = std::min(xmin, p.j_mean);
    xmax = std::max(xmax, p.j_mean);
    ymin = std::min(ymin, p.u_mean);
    ymax = std::max(ymax, p.u_mean);
  }
  auto widen = [](double& lo, double& hi) {
    const double margin = std::max(0.1 * (hi - lo), 0.05);
    lo -= margin;
    hi += margin;
  };
  widen(xmin, xmax);
  widen(ymin, ymax);
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">Mean SDR, "
     << xml_escape(report.source) << " (Pearson " << fixed(report.pearson, 3) << ", Spearman "
     << fixed(report.spearman, 3) << ")</text>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4.0;
    const double yv = ymin + (ymax - ymin) * i / 4.0;
    os << "<text x=\"" << sx(xv) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">" << fixed(xv, 2)
       << "</text>\n";
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">" << fixed(yv, 2)
       << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15
     << "\" text-anchor=\"middle\">J model mean SDR (dB)</text>\n";
  os << "<text transform=\"translate(18," << kTop + ph / 2
     << ") rotate(-90)\" text-anchor=\"middle\">U model mean SDR (dB)</text>\n";
  const double ox = sx(report.origin.j_mean), oy = sy(report.origin.u_mean);
  os << "<line x1=\"" << ox << "\" y1=\"" << kTop << "\" x2=\"" << ox << "\" y2=\"" << kTop + ph
     << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << oy << "\" x2=\"" << kLeft + pw << "\" y2=\"" << oy
     << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  os << "<circle cx=\"" << ox << "\" cy=\"" << oy << "\" r=\"5\" fill=\"red\"/>\n";
  os << "<text x=\"" << ox + 7 << "\" y=\"" << oy - 7 << "\" fill=\"red\">" << xml_escape(report.origin.variant)
     << "</text>\n";
  for (const CorrelationPoint& p : report.points) {
    os << "<circle cx=\"" << sx(p.j_mean) << "\" cy=\"" << sy(p.u_mean) << "\" r=\"4\" fill=\"steelblue\"/>\n";
    os << "<text x=\"" << sx(p.j_mean) + 6 << "\" y=\"" << sy(p.u_mean) - 6 << "\">" << xml_escape(p.variant)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_text_atomic(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename '" + tmp.string() + "': " + ec.message());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace wavesep
