// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "bosedyn/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "bosedyn/error.hpp"

namespace bosedyn::report {

namespace {

std::string num(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  f << text;
}

void write_csv(const std::filesystem::path& path, const std::vector<Column>& columns) {
  const std::size_t rows = columns.empty() ? 0 : columns.front().values.size();
  for (const Column& c : columns)
    if (c.values.size() != rows) throw Error(ErrorCode::InvalidArgument, "csv column " + c.name + " has wrong length");
  std::ostringstream s;
  for (std::size_t j = 0; j < columns.size(); ++j) s << (j ? "," : "") << columns[j].name;
  s << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) s << (j ? "," : "") << num(columns[j].values[i], 17);
    s << '\n';
  }
  write_text(path, s.str());
}

double round_significant(double value, int digits) {
  if (!std::isfinite(value) || value == 0.0) return value;
  return std::stod(num(value, digits));
}

std::string svg_line_plot(const std::string& title, const Column& x, const std::vector<Column>& series) {
  constexpr double W = 640, H = 400, left = 70, right = 150, top = 40, bottom = 50;
  constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (double v : x.values)
    if (std::isfinite(v)) xmin = std::min(xmin, v), xmax = std::max(xmax, v);
  for (const Column& c : series)
    for (std::size_t i = 0; i < c.values.size() && i < x.values.size(); ++i)
      if (std::isfinite(c.values[i]) && std::isfinite(x.values[i])) ymin = std::min(ymin, c.values[i]), ymax = std::max(ymax, c.values[i]);
  if (!(xmax >= xmin)) xmin = 0.0, xmax = 1.0;
  if (!(ymax >= ymin)) ymin = 0.0, ymax = 1.0;
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymin -= 0.5, ymax += 0.5;
  const double pw = W - left - right, ph = H - top - bottom;
  auto px = [&](double v) { return left + (v - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double v) { return top + (ymax - v) / (ymax - ymin) * ph; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape_xml(title) << "</text>\n";
  s << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = xmin + (xmax - xmin) * t / 4.0, yv = ymin + (ymax - ymin) * t / 4.0;
    s << "<text x=\"" << px(xv) << "\" y=\"" << H - bottom + 16 << "\" text-anchor=\"middle\">" << num(xv, 4) << "</text>\n";
    s << "<text x=\"" << left - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << num(yv, 4) << "</text>\n";
  }
  s << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << escape_xml(x.name) << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* colour = palette[k % std::size(palette)];
    s << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[k].values.size() && i < x.values.size(); ++i)
      if (std::isfinite(series[k].values[i]) && std::isfinite(x.values[i]))
        s << num(px(x.values[i]), 6) << ',' << num(py(series[k].values[i]), 6) << ' ';
    s << "\"/>\n";
    const double ly = top + 14 + 18 * static_cast<double>(k);
    s << "<line x1=\"" << W - right + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << W - right + 30 << "\" y2=\"" << ly - 4
      << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << W - right + 35 << "\" y=\"" << ly << "\">" << escape_xml(series[k].name) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace bosedyn::report
