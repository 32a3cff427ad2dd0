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

// Typed columnar tables and CSV ingestion.

#ifndef MID_DATASET_H_
#define MID_DATASET_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mid {

enum class ColumnType { kNumeric, kCategorical };

// A single cell value: a real for numeric columns, a level name for
// categorical ones.
using Value = std::variant<double, std::string>;

std::string to_string(const Value& value);

// Model predictions aligned with the rows of a Dataset.
using PredictionVector = std::vector<double>;

class Column {
 public:
  static Column numeric(std::string name, std::vector<double> values);
  // `codes` index into `levels`.
  static Column categorical(std::string name, std::vector<int> codes,
                            std::vector<std::string> levels);
  // Levels are the sorted distinct cell strings.
  static Column categorical_from_strings(std::string name,
                                         std::span<const std::string> cells);

  const std::string& name() const { return name_; }
  ColumnType type() const { return type_; }
  bool is_numeric() const { return type_ == ColumnType::kNumeric; }
  std::size_t size() const;

  // Numeric columns only.
  const std::vector<double>& values() const;
  // Categorical columns only.
  const std::vector<int>& codes() const;
  const std::vector<std::string>& levels() const;

  Value value(std::size_t row) const;

  // Copy of this column with every cell set to `value`. For categorical
  // columns the value must name an existing level.
  Column filled(const Value& value) const;
  Column subset(std::span<const std::size_t> rows) const;

 private:
  Column() = default;

  std::string name_;
  ColumnType type_ = ColumnType::kNumeric;
  std::vector<double> values_;
  std::vector<int> codes_;
  std::vector<std::string> levels_;
};

// Immutable-by-convention table of equally long, uniquely named columns.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<Column> columns);

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return columns_.size(); }
  const std::vector<Column>& columns() const { return columns_; }
  const Column& column(std::size_t index) const { return columns_.at(index); }
  const Column& column(std::string_view name) const;
  std::optional<std::size_t> find(std::string_view name) const;
  std::vector<std::string> names() const;

  Dataset with_column(std::size_t index, Column column) const;
  Dataset subset(std::span<const std::size_t> rows) const;
  Dataset head(std::size_t count) const;

 private:
  std::vector<Column> columns_;
  std::size_t n_rows_ = 0;
};

struct LabeledData {
  Dataset dataset;
  PredictionVector predictions;
};

struct CsvOptions {
  // Column excluded from the dataset and returned as the prediction vector.
  std::optional<std::string> prediction_column;
  std::map<std::string, ColumnType> type_hints;
};

// Reads a comma separated file with a header row. Lines starting with '#'
// before the header are skipped. Fields may be double-quoted. A column is
// numeric when every cell parses as a finite real and no hint says otherwise.
LabeledData load_csv(const std::filesystem::path& path,
                     const CsvOptions& options = {});
LabeledData parse_csv(std::string_view text, const CsvOptions& options = {});

// Writes `dataset` (and optionally a prediction column) with 17 significant
// digits. `header_comment` is emitted as a leading "# ..." line when set.
void write_csv(const std::filesystem::path& path, const Dataset& dataset,
               const PredictionVector* predictions = nullptr,
               std::string_view prediction_name = "yhat",
               std::optional<std::string> header_comment = std::nullopt);
std::string format_csv_field(std::string_view field);
std::string format_real(double value);

}  // namespace mid

#endif  // MID_DATASET_H_
