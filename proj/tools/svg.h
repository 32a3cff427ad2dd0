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


// Minimal SVG emission for the command-line tool: line plots, heatmaps and
// waterfall charts stacked vertically in one document. Styling is fixed;
// every panel is a <g class="plot"> element.

#ifndef MID_TOOLS_SVG_H_
#define MID_TOOLS_SVG_H_

#include <string>
#include <vector>

namespace mid::svg {

struct Series {
  std::vector<double> x;
  std::vector<double> y;
};

struct WaterfallStep {
  std::string label;
  double start = 0.0;
  double end = 0.0;
};

class Document {
 public:
  // `metadata` is embedded verbatim (escaped) in a <metadata> element.
  explicit Document(std::string metadata) : metadata_(std::move(metadata)) {}

  void line_plot(const std::string& id, const std::string& title, const std::string& x_label,
                 const std::string& y_label, const std::vector<Series>& series);
  // values[r][c] over row labels (y axis) and column labels (x axis).
  void heatmap(const std::string& id, const std::string& title,
               const std::vector<std::string>& column_labels,
               const std::vector<std::string>& row_labels,
               const std::vector<std::vector<double>>& values);
  void waterfall(const std::string& id, const std::string& title,
                 const std::vector<WaterfallStep>& steps);
  void bar_chart(const std::string& id, const std::string& title,
                 const std::vector<std::string>& labels, const std::vector<double>& values);

  std::string str() const;

 private:
  std::string metadata_;
  std::vector<std::string> panels_;
};

std::string escape(const std::string& text);

}  // namespace mid::svg

#endif  // MID_TOOLS_SVG_H_
