#include "supergrid/matrix.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "supergrid/error.hpp"

namespace supergrid {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> generated_names(const char* prefix, std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i + 1));
  return names;
}

std::optional<double> parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

struct Record {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

// RFC 4180 style: quoted fields may hold commas, doubled quotes and newlines.
std::vector<Record> split_records(std::string_view text) {
  std::vector<Record> records;
  Record current;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  current.line = 1;

  auto end_record = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    const bool blank = current.fields.size() == 1 && current.fields[0].empty() && !field_started;
    if (!blank) records.push_back(std::move(current));
    current = Record{};
    field_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    switch (ch) {
      case '"':
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        current.fields.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        current.line = line;
        break;
      default:
        field.push_back(ch);
        field_started = true;
    }
  }
  if (in_quotes) throw Error("row " + std::to_string(current.line) + ": unterminated quoted field");
  if (field_started || !current.fields.empty()) end_record();
  return records;
}

void warn_duplicates(const std::vector<std::string>& names, const char* what,
                     std::vector<std::string>* warnings) {
  if (!warnings) return;
  std::map<std::string, std::size_t> seen;
  for (const auto& n : names) ++seen[n];
  for (const auto& [name, count] : seen) {
    if (count > 1) {
      warnings->push_back("duplicate " + std::string(what) + " name '" + name + "' appears " +
                          std::to_string(count) + " times");
    }
  }
}

}  // namespace

// LabeledMatrix ------------------------------------------------------------

LabeledMatrix::LabeledMatrix(std::size_t rows, std::size_t cols,
                             const std::vector<std::optional<double>>& cells,
                             std::vector<std::string> row_names, std::vector<std::string> col_names)
    : rows_(rows), cols_(cols), row_names_(std::move(row_names)), col_names_(std::move(col_names)) {
  if (rows == 0 || cols == 0) throw Error("matrix must have at least one row and one column");
  if (cells.size() != rows * cols) {
    throw Error("matrix cell count " + std::to_string(cells.size()) + " does not match " +
                std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (row_names_.empty()) row_names_ = generated_names("r", rows);
  if (col_names_.empty()) col_names_ = generated_names("c", cols);
  if (row_names_.size() != rows) throw Error("row name count does not match row count");
  if (col_names_.size() != cols) throw Error("column name count does not match column count");
  values_.resize(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i] && !std::isfinite(*cells[i])) {
      throw Error("non-finite value at row " + std::to_string(i / cols + 1) + ", column " +
                  std::to_string(i % cols + 1));
    }
    values_[i] = cells[i].value_or(kMissing);
  }
}

LabeledMatrix LabeledMatrix::dense(std::size_t rows, std::size_t cols, std::vector<double> values,
                                   std::vector<std::string> row_names,
                                   std::vector<std::string> col_names) {
  std::vector<std::optional<double>> cells(values.begin(), values.end());
  return LabeledMatrix(rows, cols, cells, std::move(row_names), std::move(col_names));
}

std::optional<double> LabeledMatrix::at(std::size_t r, std::size_t c) const {
  const double v = values_.at(r * cols_ + c);
  if (std::isnan(v)) return std::nullopt;
  return v;
}

bool LabeledMatrix::is_missing(std::size_t r, std::size_t c) const {
  return std::isnan(values_.at(r * cols_ + c));
}

std::size_t LabeledMatrix::missing_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](double v) { return std::isnan(v); }));
}

std::span<const double> LabeledMatrix::row(std::size_t r) const {
  return std::span<const double>(values_).subspan(r * cols_, cols_);
}

LabeledMatrix LabeledMatrix::transposed() const {
  LabeledMatrix t;
  t.rows_ = cols_;
  t.cols_ = rows_;
  t.row_names_ = col_names_;
  t.col_names_ = row_names_;
  t.values_.resize(values_.size());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t.values_[c * rows_ + r] = values_[r * cols_ + c];
  return t;
}

std::optional<std::pair<double, double>> LabeledMatrix::value_range() const {
  std::optional<std::pair<double, double>> range;
  for (double v : values_) {
    if (std::isnan(v)) continue;
    if (!range) {
      range = std::make_pair(v, v);
    } else {
      range->first = std::min(range->first, v);
      range->second = std::max(range->second, v);
    }
  }
  return range;
}

bool operator==(const LabeledMatrix& a, const LabeledMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_ || a.row_names_ != b.row_names_ ||
      a.col_names_ != b.col_names_)
    return false;
  for (std::size_t i = 0; i < a.values_.size(); ++i) {
    const double x = a.values_[i];
    const double y = b.values_[i];
    if (std::isnan(x) != std::isnan(y)) return false;
    if (!std::isnan(x) && x != y) return false;
  }
  return true;
}

// Ordering ------------------------------------------------------------------

Ordering::Ordering(Axis axis, std::vector<std::size_t> permutation)
    : axis_(axis), permutation_(std::move(permutation)) {
  std::vector<bool> seen(permutation_.size(), false);
  for (std::size_t p : permutation_) {
    if (p >= permutation_.size() || seen[p]) {
      throw Error("ordering is not a permutation of 0.." +
                  std::to_string(permutation_.size() == 0 ? 0 : permutation_.size() - 1));
    }
    seen[p] = true;
  }
}

Ordering Ordering::identity(Axis axis, std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  return Ordering(axis, std::move(p));
}

Ordering Ordering::inverse() const {
  std::vector<std::size_t> inv(permutation_.size());
  for (std::size_t i = 0; i < permutation_.size(); ++i) inv[permutation_[i]] = i;
  return Ordering(axis_, std::move(inv));
}

Ordering Ordering::then(const Ordering& next) const {
  if (next.size() != size()) throw Error("cannot compose orderings of different lengths");
  std::vector<std::size_t> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = permutation_[next[i]];
  return Ordering(axis_, std::move(out));
}

Ordering order_by_values(Axis axis, std::span<const double> keys, SortDirection direction) {
  std::vector<std::size_t> p(keys.size());
  std::iota(p.begin(), p.end(), std::size_t{0});
  if (direction == SortDirection::ascending) {
    std::stable_sort(p.begin(), p.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  } else {
    std::stable_sort(p.begin(), p.end(), [&](std::size_t a, std::size_t b) { return keys[a] > keys[b]; });
  }
  return Ordering(axis, std::move(p));
}

namespace {

std::vector<double> present_means(const LabeledMatrix& m, Axis axis) {
  const std::size_t n = axis == Axis::row ? m.rows() : m.cols();
  const std::size_t len = axis == Axis::row ? m.cols() : m.rows();
  const auto& names = axis == Axis::row ? m.row_names() : m.col_names();
  std::vector<double> means(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < len; ++j) {
      const auto v = axis == Axis::row ? m.at(i, j) : m.at(j, i);
      if (v) {
        sum += *v;
        ++count;
      }
    }
    if (count == 0) {
      throw Error(std::string(axis == Axis::row ? "row" : "column") + " " + std::to_string(i + 1) +
                  " ('" + names[i] + "') has no present values");
    }
    means[i] = sum / static_cast<double>(count);
  }
  return means;
}

}  // namespace

Ordering order_by_row_mean(const LabeledMatrix& m, SortDirection direction) {
  const auto means = present_means(m, Axis::row);
  return order_by_values(Axis::row, means, direction);
}

Ordering order_by_col_mean(const LabeledMatrix& m, SortDirection direction) {
  const auto means = present_means(m, Axis::column);
  return order_by_values(Axis::column, means, direction);
}

LabeledMatrix apply_ordering(const LabeledMatrix& m, const std::optional<Ordering>& rows,
                             const std::optional<Ordering>& cols) {
  if (rows && rows->size() != m.rows()) {
    throw Error("row ordering has length " + std::to_string(rows->size()) + ", matrix has " +
                std::to_string(m.rows()) + " rows");
  }
  if (cols && cols->size() != m.cols()) {
    throw Error("column ordering has length " + std::to_string(cols->size()) + ", matrix has " +
                std::to_string(m.cols()) + " columns");
  }
  const Ordering rp = rows.value_or(Ordering::identity(Axis::row, m.rows()));
  const Ordering cp = cols.value_or(Ordering::identity(Axis::column, m.cols()));
  std::vector<std::optional<double>> cells;
  cells.reserve(m.rows() * m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) cells.push_back(m.at(rp[r], cp[c]));
  return LabeledMatrix(m.rows(), m.cols(), cells, permute(m.row_names(), rp),
                       permute(m.col_names(), cp));
}

// CSV -----------------------------------------------------------------------

std::vector<std::vector<std::string>> parse_csv_records(std::string_view text) {
  std::vector<std::vector<std::string>> out;
  for (auto& rec : split_records(text)) out.push_back(std::move(rec.fields));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LabeledMatrix parse_matrix_csv(std::string_view text, const CsvOptions& options,
                               std::vector<std::string>* warnings) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  const auto records = split_records(text);
  if (records.empty()) throw Error("CSV is empty");
  const std::size_t expected = records.front().fields.size();
  for (const auto& rec : records) {
    if (rec.fields.size() != expected) {
      throw Error("row " + std::to_string(rec.line) + ": expected " + std::to_string(expected) +
                  " fields, got " + std::to_string(rec.fields.size()));
    }
  }
  const std::size_t first_value_col = options.row_names ? 1 : 0;
  if (expected <= first_value_col) throw Error("CSV has no value columns");
  const std::size_t cols = expected - first_value_col;
  const std::size_t first_data = options.header ? 1 : 0;
  if (records.size() <= first_data) throw Error("CSV has no data rows");
  const std::size_t rows = records.size() - first_data;

  std::vector<std::string> col_names;
  if (options.header) {
    const auto& h = records.front().fields;
    col_names.assign(h.begin() + static_cast<std::ptrdiff_t>(first_value_col), h.end());
  }
  std::vector<std::string> row_names;
  std::vector<std::optional<double>> cells;
  cells.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& rec = records[first_data + r];
    if (options.row_names) row_names.push_back(rec.fields[0]);
    for (std::size_t c = 0; c < cols; ++c) {
      const std::string& cell = rec.fields[first_value_col + c];
      if (options.na_tokens.count(cell)) {
        cells.emplace_back(std::nullopt);
        continue;
      }
      const auto v = parse_double(cell);
      if (!v) {
        throw Error("row " + std::to_string(rec.line) + ", column " +
                    std::to_string(first_value_col + c + 1) + ": cannot parse '" + cell +
                    "' as a finite number");
      }
      cells.emplace_back(*v);
    }
  }
  warn_duplicates(row_names, "row", warnings);
  warn_duplicates(col_names, "column", warnings);
  return LabeledMatrix(rows, cols, cells, std::move(row_names), std::move(col_names));
}

LabeledMatrix load_matrix(const std::string& path, const CsvOptions& options,
                          std::vector<std::string>* warnings) {
  const std::string text = read_file(path);
  try {
    return parse_matrix_csv(text, options, warnings);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_matrix_csv(std::ostream& out, const LabeledMatrix& m) {
  out << "\"\"";
  for (const auto& name : m.col_names()) out << ',' << csv_escape(name);
  out << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out << csv_escape(m.row_names()[r]);
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const auto v = m.at(r, c);
      out << ',' << (v ? format_number(*v) : std::string("NA"));
    }
    out << '\n';
  }
}

std::string matrix_to_csv(const LabeledMatrix& m) {
  std::ostringstream ss;
  write_matrix_csv(ss, m);
  return ss.str();
}

// Adjacent series -------------------------------------------------------------

std::optional<PlotType> parse_plot_type(std::string_view name) {
  static const std::pair<std::string_view, PlotType> table[] = {
      {"scatter", PlotType::scatter},       {"scatterline", PlotType::scatterline},
      {"scattersmooth", PlotType::scattersmooth}, {"smooth", PlotType::smooth},
      {"bar", PlotType::bar},               {"line", PlotType::line},
      {"boxplot", PlotType::boxplot},       {"dendrogram", PlotType::dendrogram},
  };
  for (const auto& [key, type] : table)
    if (key == name) return type;
  return std::nullopt;
}

std::string_view to_string(PlotType type) {
  switch (type) {
    case PlotType::scatter: return "scatter";
    case PlotType::scatterline: return "scatterline";
    case PlotType::scattersmooth: return "scattersmooth";
    case PlotType::smooth: return "smooth";
    case PlotType::bar: return "bar";
    case PlotType::line: return "line";
    case PlotType::boxplot: return "boxplot";
    case PlotType::dendrogram: return "dendrogram";
  }
  return "scatter";
}

AdjacentSeries AdjacentSeries::reordered(const Ordering& order) const {
  if (order.size() != values.size()) {
    throw Error(std::string(side == PanelSide::top ? "top" : "right") + " panel has " +
                std::to_string(values.size()) + " values, axis has " + std::to_string(order.size()));
  }
  AdjacentSeries out = *this;
  out.values = permute(values, order);
  if (point_colors.size() == values.size()) out.point_colors = permute(point_colors, order);
  if (bar_colors.size() == values.size()) out.bar_colors = permute(bar_colors, order);
  return out;
}

std::vector<double> AdjacentSeries::present_values() const {
  std::vector<double> out;
  for (const auto& v : values)
    if (v) out.push_back(*v);
  return out;
}

std::vector<std::optional<double>> parse_series_csv(std::string_view text,
                                                    const CsvOptions& options) {
  const auto records = split_records(text);
  std::vector<std::optional<double>> values;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    if (rec.fields.size() != 2) {
      throw Error("row " + std::to_string(rec.line) + ": expected 2 fields, got " +
                  std::to_string(rec.fields.size()));
    }
    const std::string& cell = rec.fields[1];
    if (options.na_tokens.count(cell)) {
      values.emplace_back(std::nullopt);
      continue;
    }
    const auto v = parse_double(cell);
    if (!v) {
      if (i == 0) continue;  // header
      throw Error("row " + std::to_string(rec.line) + ", column 2: cannot parse '" + cell +
                  "' as a finite number");
    }
    values.emplace_back(*v);
  }
  if (values.empty()) throw Error("series CSV has no values");
  return values;
}

std::vector<std::optional<double>> load_series(const std::string& path, const CsvOptions& options) {
  const std::string text = read_file(path);
  try {
    return parse_series_csv(text, options);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

std::vector<std::optional<double>> series_from_column(const LabeledMatrix& m,
                                                      const std::string& column) {
  const auto& names = m.col_names();
  const auto it = std::find(names.begin(), names.end(), column);
  if (it == names.end()) throw Error("matrix has no column named '" + column + "'");
  const auto c = static_cast<std::size_t>(it - names.begin());
  std::vector<std::optional<double>> out;
  for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(m.at(r, c));
  return out;
}

}  // namespace supergrid
