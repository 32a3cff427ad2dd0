/*
 * Copyright 2026 The mid Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "svg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace mid::svg {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 360.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;
constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string num(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", value);
  return buffer;
}

std::string tick(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.3g", value);
  return buffer;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (hi - lo <= 0.0) {
      const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
      lo -= pad;
      hi += pad;
    }
  }
  double map(double v, double a, double b) const { return a + (v - lo) / (hi - lo) * (b - a); }
};

// Opens a panel group with frame, title and axis labels.
std::string open_panel(const std::string& id, const std::string& title,
                       const std::string& x_label, const std::string& y_label) {
  std::ostringstream out;
  out << "<g class=\"plot\" data-term=\"" << escape(id) << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\" stroke=\"#cccccc\"/>\n";
  out << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-size=\"14\">" << escape(title) << "</text>\n";
  out << "<text x=\"" << num(kWidth / 2) << "\" y=\"" << num(kHeight - 10)
      << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(x_label) << "</text>\n";
  out << "<text x=\"14\" y=\"" << num(kHeight / 2) << "\" text-anchor=\"middle\" font-size=\"12\" "
      << "transform=\"rotate(-90 14 " << num(kHeight / 2) << ")\">" << escape(y_label)
      << "</text>\n";
  return out.str();
}

std::string axes(const Range& x, const Range& y, bool numeric_x) {
  std::ostringstream out;
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  out << "<path d=\"M" << num(x0) << ' ' << num(y1) << " V" << num(y0) << " H" << num(x1)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = y.lo + (y.hi - y.lo) * t / 4.0;
    const double py = y.map(v, y0, y1);
    out << "<text x=\"" << num(x0 - 4) << "\" y=\"" << num(py + 4)
        << "\" text-anchor=\"end\" font-size=\"10\">" << tick(v) << "</text>\n";
    if (numeric_x) {
      const double u = x.lo + (x.hi - x.lo) * t / 4.0;
      const double px = x.map(u, x0, x1);
      out << "<text x=\"" << num(px) << "\" y=\"" << num(y0 + 14)
          << "\" text-anchor=\"middle\" font-size=\"10\">" << tick(u) << "</text>\n";
    }
  }
  return out.str();
}

// Diverging blue-white-red scale over [-limit, limit].
std::string colour(double value, double limit) {
  const double t = limit > 0.0 ? std::clamp(value / limit, -1.0, 1.0) : 0.0;
  const auto channel = [](double c) { return static_cast<int>(std::lround(255.0 * c)); };
  int r, g, b;
  if (t >= 0) {
    r = 255;
    g = channel(1.0 - 0.8 * t);
    b = channel(1.0 - 0.8 * t);
  } else {
    r = channel(1.0 + 0.8 * t);
    g = channel(1.0 + 0.8 * t);
    b = 255;
  }
  char buffer[16];
  std::snprintf(buffer, sizeof(buffer), "#%02x%02x%02x", r, g, b);
  return buffer;
}

}  // namespace

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

void Document::line_plot(const std::string& id, const std::string& title,
                         const std::string& x_label, const std::string& y_label,
                         const std::vector<Series>& series) {
  Range x, y;
  for (const auto& s : series) {
    for (double v : s.x) x.add(v);
    for (double v : s.y) y.add(v);
  }
  x.finish();
  y.finish();
  std::ostringstream out;
  out << open_panel(id, title, x_label, y_label) << axes(x, y, true);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  const double opacity = series.size() > 8 ? 0.35 : 1.0;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    out << "<polyline fill=\"none\" stroke=\"" << kPalette[k % 8] << "\" stroke-opacity=\""
        << opacity << "\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (i) out << ' ';
      out << num(x.map(s.x[i], x0, x1)) << ',' << num(y.map(s.y[i], y0, y1));
    }
    out << "\"/>\n";
  }
  out << "</g>\n";
  panels_.push_back(out.str());
}

void Document::heatmap(const std::string& id, const std::string& title,
                       const std::vector<std::string>& column_labels,
                       const std::vector<std::string>& row_labels,
                       const std::vector<std::vector<double>>& values) {
  double limit = 0.0;
  for (const auto& row : values) {
    for (double v : row) {
      if (std::isfinite(v)) limit = std::max(limit, std::abs(v));
    }
  }
  std::ostringstream out;
  out << open_panel(id, title, "", "");
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  const std::size_t cols = column_labels.size(), rows = row_labels.size();
  const double cw = cols ? (x1 - x0) / static_cast<double>(cols) : 0.0;
  const double ch = rows ? (y0 - y1) / static_cast<double>(rows) : 0.0;
  for (std::size_t r = 0; r < rows && r < values.size(); ++r) {
    for (std::size_t c = 0; c < cols && c < values[r].size(); ++c) {
      // Row 0 at the bottom, like a plot's y axis.
      const double py = y0 - static_cast<double>(r + 1) * ch;
      out << "<rect x=\"" << num(x0 + static_cast<double>(c) * cw) << "\" y=\"" << num(py)
          << "\" width=\"" << num(cw) << "\" height=\"" << num(ch) << "\" fill=\""
          << colour(values[r][c], limit) << "\"><title>" << escape(row_labels[r]) << ", "
          << escape(column_labels[c]) << ": " << tick(values[r][c]) << "</title></rect>\n";
    }
  }
  const std::size_t x_step = std::max<std::size_t>(1, cols / 8);
  for (std::size_t c = 0; c < cols; c += x_step) {
    out << "<text x=\"" << num(x0 + (static_cast<double>(c) + 0.5) * cw) << "\" y=\""
        << num(y0 + 14) << "\" text-anchor=\"middle\" font-size=\"10\">"
        << escape(column_labels[c]) << "</text>\n";
  }
  const std::size_t y_step = std::max<std::size_t>(1, rows / 8);
  for (std::size_t r = 0; r < rows; r += y_step) {
    out << "<text x=\"" << num(x0 - 4) << "\" y=\""
        << num(y0 - (static_cast<double>(r) + 0.5) * ch + 4)
        << "\" text-anchor=\"end\" font-size=\"10\">" << escape(row_labels[r]) << "</text>\n";
  }
  out << "</g>\n";
  panels_.push_back(out.str());
}

void Document::waterfall(const std::string& id, const std::string& title,
                         const std::vector<WaterfallStep>& steps) {
  Range y;
  for (const auto& s : steps) {
    y.add(s.start);
    y.add(s.end);
  }
  y.finish();
  Range x;
  x.add(0.0);
  x.add(static_cast<double>(steps.size()));
  x.finish();
  std::ostringstream out;
  out << open_panel(id, title, "", "prediction") << axes(x, y, false);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  const double bw = steps.empty() ? 0.0 : (x1 - x0) / static_cast<double>(steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    const double top = y.map(std::max(s.start, s.end), y0, y1);
    const double bottom = y.map(std::min(s.start, s.end), y0, y1);
    out << "<rect x=\"" << num(x0 + (static_cast<double>(i) + 0.1) * bw) << "\" y=\"" << num(top)
        << "\" width=\"" << num(0.8 * bw) << "\" height=\"" << num(std::max(bottom - top, 0.5))
        << "\" fill=\"" << (s.end >= s.start ? "#d62728" : "#1f77b4") << "\"><title>"
        << escape(s.label) << ": " << tick(s.end - s.start) << "</title></rect>\n";
    out << "<text x=\"" << num(x0 + (static_cast<double>(i) + 0.5) * bw) << "\" y=\""
        << num(y0 + 14) << "\" text-anchor=\"middle\" font-size=\"9\">" << escape(s.label)
        << "</text>\n";
  }
  out << "</g>\n";
  panels_.push_back(out.str());
}

void Document::bar_chart(const std::string& id, const std::string& title,
                         const std::vector<std::string>& labels,
                         const std::vector<double>& values) {
  std::vector<WaterfallStep> steps;
  for (std::size_t i = 0; i < labels.size() && i < values.size(); ++i) {
    steps.push_back({labels[i], 0.0, values[i]});
  }
  waterfall(id, title, steps);
}

std::string Document::str() const {
  std::ostringstream out;
  const double height = kHeight * static_cast<double>(std::max<std::size_t>(1, panels_.size()));
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << height << "\" viewBox=\"0 0 " << kWidth << ' ' << height << "\">\n";
  out << "<metadata>" << escape(metadata_) << "</metadata>\n";
  for (std::size_t p = 0; p < panels_.size(); ++p) {
    out << "<g transform=\"translate(0 " << kHeight * static_cast<double>(p) << ")\">\n"
        << panels_[p] << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace mid::svg
