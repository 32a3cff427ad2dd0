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

#include "mid/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "mid/error.h"

namespace mid {

std::string format_real(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string to_string(const Value& value) {
  if (const auto* real = std::get_if<double>(&value)) return format_real(*real);
  return std::get<std::string>(value);
}

Column Column::numeric(std::string name, std::vector<double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw DataError("column '" + name + "': non-finite value at row " +
                      std::to_string(i + 1));
    }
  }
  Column column;
  column.name_ = std::move(name);
  column.type_ = ColumnType::kNumeric;
  column.values_ = std::move(values);
  return column;
}

Column Column::categorical(std::string name, std::vector<int> codes,
                           std::vector<std::string> levels) {
  std::set<std::string_view> seen;
  for (const auto& level : levels) {
    if (!seen.insert(level).second) {
      throw DataError("column '" + name + "': duplicate level '" + level + "'");
    }
  }
  for (int code : codes) {
    if (code < 0 || code >= static_cast<int>(levels.size())) {
      throw DataError("column '" + name + "': level code out of range");
    }
  }
  Column column;
  column.name_ = std::move(name);
  column.type_ = ColumnType::kCategorical;
  column.codes_ = std::move(codes);
  column.levels_ = std::move(levels);
  return column;
}

Column Column::categorical_from_strings(std::string name,
                                        std::span<const std::string> cells) {
  std::vector<std::string> levels(cells.begin(), cells.end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::unordered_map<std::string_view, int> index;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    index.emplace(levels[i], static_cast<int>(i));
  }
  std::vector<int> codes;
  codes.reserve(cells.size());
  for (const auto& cell : cells) codes.push_back(index.at(cell));
  return categorical(std::move(name), std::move(codes), std::move(levels));
}

std::size_t Column::size() const {
  return is_numeric() ? values_.size() : codes_.size();
}

const std::vector<double>& Column::values() const {
  if (!is_numeric()) {
    throw DataError("column '" + name_ + "' is categorical, not numeric");
  }
  return values_;
}

const std::vector<int>& Column::codes() const {
  if (is_numeric()) {
    throw DataError("column '" + name_ + "' is numeric, not categorical");
  }
  return codes_;
}

const std::vector<std::string>& Column::levels() const {
  if (is_numeric()) {
    throw DataError("column '" + name_ + "' is numeric, not categorical");
  }
  return levels_;
}

Value Column::value(std::size_t row) const {
  if (is_numeric()) return values_.at(row);
  return levels_.at(static_cast<std::size_t>(codes_.at(row)));
}

Column Column::filled(const Value& value) const {
  if (is_numeric()) {
    const auto* real = std::get_if<double>(&value);
    if (real == nullptr) {
      throw DataError("column '" + name_ + "' is numeric; got level '" +
                      std::get<std::string>(value) + "'");
    }
    return numeric(name_, std::vector<double>(size(), *real));
  }
  const std::string label = to_string(value);
  auto it = std::find(levels_.begin(), levels_.end(), label);
  if (it == levels_.end()) {
    throw DataError("column '" + name_ + "': unknown level '" + label + "'");
  }
  const int code = static_cast<int>(it - levels_.begin());
  return categorical(name_, std::vector<int>(size(), code), levels_);
}

Column Column::subset(std::span<const std::size_t> rows) const {
  if (is_numeric()) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (auto r : rows) out.push_back(values_.at(r));
    return numeric(name_, std::move(out));
  }
  std::vector<int> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(codes_.at(r));
  return categorical(name_, std::move(out), levels_);
}

Dataset::Dataset(std::vector<Column> columns) : columns_(std::move(columns)) {
  std::set<std::string_view> names;
  for (const auto& column : columns_) {
    if (!names.insert(column.name()).second) {
      throw DataError("duplicate column name '" + column.name() + "'");
    }
  }
  if (!columns_.empty()) n_rows_ = columns_.front().size();
  for (const auto& column : columns_) {
    if (column.size() != n_rows_) {
      throw DataError("column '" + column.name() + "' has " +
                      std::to_string(column.size()) + " rows, expected " +
                      std::to_string(n_rows_));
    }
  }
}

std::optional<std::size_t> Dataset::find(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name() == name) return i;
  }
  return std::nullopt;
}

const Column& Dataset::column(std::string_view name) const {
  auto index = find(name);
  if (!index) throw DataError("missing column '" + std::string(name) + "'");
  return columns_[*index];
}

std::vector<std::string> Dataset::names() const {
  std::vector<std::string> out;
  out.reserve(columns_.size());
  for (const auto& column : columns_) out.push_back(column.name());
  return out;
}

Dataset Dataset::with_column(std::size_t index, Column column) const {
  std::vector<Column> columns = columns_;
  columns.at(index) = std::move(column);
  return Dataset(std::move(columns));
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  std::vector<Column> columns;
  columns.reserve(columns_.size());
  for (const auto& column : columns_) columns.push_back(column.subset(rows));
  return Dataset(std::move(columns));
}

Dataset Dataset::head(std::size_t count) const {
  std::vector<std::size_t> rows(std::min(count, n_rows_));
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return subset(rows);
}

namespace {

using Record = std::vector<std::string>;

// Splits CSV text into records. Quoted fields may contain commas, newlines
// and doubled quotes.
std::vector<Record> tokenize(std::string_view text) {
  std::vector<Record> records;
  Record record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) throw DataError("unterminated quoted field");
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_real(std::string_view cell) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty() ||
      !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

bool is_comment_or_blank(const Record& record) {
  if (record.size() == 1 && trim(record[0]).empty()) return true;
  return !record.empty() && !record[0].empty() && record[0][0] == '#';
}

}  // namespace

LabeledData parse_csv(std::string_view text, const CsvOptions& options) {
  std::vector<Record> records = tokenize(text);
  std::size_t first = 0;
  while (first < records.size() && is_comment_or_blank(records[first])) ++first;
  if (first == records.size()) throw DataError("CSV has no header row");
  const Record& header = records[first];
  const std::size_t width = header.size();

  std::vector<const Record*> rows;
  for (std::size_t r = first + 1; r < records.size(); ++r) {
    const Record& record = records[r];
    if (record.size() == 1 && trim(record[0]).empty() && width > 1) continue;
    if (record.size() != width) {
      throw DataError("ragged row " + std::to_string(rows.size() + 1) +
                      ": expected " + std::to_string(width) + " fields, got " +
                      std::to_string(record.size()));
    }
    for (std::size_t c = 0; c < width; ++c) {
      if (trim(record[c]).empty()) {
        throw DataError("missing value at row " + std::to_string(rows.size() + 1) +
                        " (column '" + header[c] + "')");
      }
    }
    rows.push_back(&record);
  }

  std::optional<std::size_t> prediction_index;
  if (options.prediction_column) {
    for (std::size_t c = 0; c < width; ++c) {
      if (trim(header[c]) == *options.prediction_column) prediction_index = c;
    }
    if (!prediction_index) {
      throw DataError("prediction column '" + *options.prediction_column +
                      "' not found");
    }
  }

  LabeledData out;
  std::vector<Column> columns;
  for (std::size_t c = 0; c < width; ++c) {
    const std::string name(trim(header[c]));
    std::vector<double> reals;
    reals.reserve(rows.size());
    bool numeric = true;
    for (const Record* row : rows) {
      auto value = parse_real((*row)[c]);
      if (!value) {
        numeric = false;
        break;
      }
      reals.push_back(*value);
    }
    if (prediction_index && c == *prediction_index) {
      if (!numeric) {
        throw DataError("prediction column '" + name + "' is not numeric");
      }
      out.predictions = std::move(reals);
      continue;
    }
    auto hint = options.type_hints.find(name);
    if (hint != options.type_hints.end() &&
        hint->second == ColumnType::kCategorical) {
      numeric = false;
    }
    if (hint != options.type_hints.end() &&
        hint->second == ColumnType::kNumeric && !numeric) {
      throw DataError("column '" + name + "' hinted numeric but does not parse");
    }
    if (numeric) {
      columns.push_back(Column::numeric(name, std::move(reals)));
    } else {
      std::vector<std::string> cells;
      cells.reserve(rows.size());
      for (const Record* row : rows) cells.emplace_back(trim((*row)[c]));
      columns.push_back(Column::categorical_from_strings(name, cells));
    }
  }
  out.dataset = Dataset(std::move(columns));
  return out;
}

LabeledData load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), options);
}

std::string format_csv_field(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_csv(const std::filesystem::path& path, const Dataset& dataset,
               const PredictionVector* predictions, std::string_view prediction_name,
               std::optional<std::string> header_comment) {
  if (predictions != nullptr && predictions->size() != dataset.n_rows()) {
    throw DataError("prediction vector length does not match dataset rows");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  if (header_comment) out << "# " << *header_comment << '\n';
  for (std::size_t c = 0; c < dataset.n_cols(); ++c) {
    if (c > 0) out << ',';
    out << format_csv_field(dataset.column(c).name());
  }
  if (predictions != nullptr) {
    out << (dataset.n_cols() > 0 ? "," : "") << format_csv_field(prediction_name);
  }
  out << '\n';
  for (std::size_t r = 0; r < dataset.n_rows(); ++r) {
    for (std::size_t c = 0; c < dataset.n_cols(); ++c) {
      if (c > 0) out << ',';
      out << format_csv_field(to_string(dataset.column(c).value(r)));
    }
    if (predictions != nullptr) {
      out << (dataset.n_cols() > 0 ? "," : "") << format_real((*predictions)[r]);
    }
    out << '\n';
  }
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

}  // namespace mid
