#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace supergrid {

enum class Axis { row, column };

/// A dense R x C grid of reals with row/column names and explicit missing
/// cells. Missing cells are stored as quiet NaN; present values are always
/// finite. Names need not be unique, identity is positional.
class LabeledMatrix {
 public:
  LabeledMatrix() = default;

  /// `cells` is row-major with R*C entries; std::nullopt marks a missing cell.
  LabeledMatrix(std::size_t rows, std::size_t cols, const std::vector<std::optional<double>>& cells,
                std::vector<std::string> row_names, std::vector<std::string> col_names);

  /// Builds a matrix with no missing cells and generated names ("r1", "c1", ...)
  /// unless names are supplied.
  static LabeledMatrix dense(std::size_t rows, std::size_t cols, std::vector<double> values,
                             std::vector<std::string> row_names = {},
                             std::vector<std::string> col_names = {});

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::optional<double> at(std::size_t r, std::size_t c) const;
  bool is_missing(std::size_t r, std::size_t c) const;
  std::size_t missing_count() const noexcept;
  bool has_missing() const noexcept { return missing_count() > 0; }

  /// Raw row storage; missing cells read as NaN.
  std::span<const double> row(std::size_t r) const;
  std::span<const double> raw() const noexcept { return values_; }

  const std::vector<std::string>& row_names() const noexcept { return row_names_; }
  const std::vector<std::string>& col_names() const noexcept { return col_names_; }

  LabeledMatrix transposed() const;

  /// Present values as a min/max pair; nullopt when every cell is missing.
  std::optional<std::pair<double, double>> value_range() const;

  friend bool operator==(const LabeledMatrix& a, const LabeledMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
  std::vector<std::string> row_names_;
  std::vector<std::string> col_names_;
};

/// A permutation of one axis. Position i of the reordered axis shows the
/// element at original index permutation()[i].
class Ordering {
 public:
  Ordering(Axis axis, std::vector<std::size_t> permutation);

  static Ordering identity(Axis axis, std::size_t n);

  Axis axis() const noexcept { return axis_; }
  std::size_t size() const noexcept { return permutation_.size(); }
  const std::vector<std::size_t>& permutation() const noexcept { return permutation_; }
  std::size_t operator[](std::size_t i) const { return permutation_[i]; }

  Ordering inverse() const;
  /// Applies `this` first, then `next`.
  Ordering then(const Ordering& next) const;

  friend bool operator==(const Ordering&, const Ordering&) = default;

 private:
  Axis axis_;
  std::vector<std::size_t> permutation_;
};

enum class SortDirection { ascending, descending };

Ordering order_by_row_mean(const LabeledMatrix& m, SortDirection direction);
Ordering order_by_col_mean(const LabeledMatrix& m, SortDirection direction);

/// Stable ordering of arbitrary keys; ties keep original index order.
Ordering order_by_values(Axis axis, std::span<const double> keys, SortDirection direction);

LabeledMatrix apply_ordering(const LabeledMatrix& m, const std::optional<Ordering>& rows,
                             const std::optional<Ordering>& cols);

template <typename T>
std::vector<T> permute(const std::vector<T>& values, const Ordering& order) {
  std::vector<T> out;
  out.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) out.push_back(values[order[i]]);
  return out;
}

struct CsvOptions {
  bool header = true;
  bool row_names = true;
  std::set<std::string> na_tokens = {"", "NA"};
};

/// Parses a CSV document. Warnings (duplicate names) are appended to
/// `warnings` when it is non-null.
LabeledMatrix parse_matrix_csv(std::string_view text, const CsvOptions& options = {},
                               std::vector<std::string>* warnings = nullptr);
LabeledMatrix load_matrix(const std::string& path, const CsvOptions& options = {},
                          std::vector<std::string>* warnings = nullptr);

/// Writes header + row names, "NA" for missing cells, shortest round-trip
/// number formatting.
void write_matrix_csv(std::ostream& out, const LabeledMatrix& m);
std::string matrix_to_csv(const LabeledMatrix& m);

// Adjacent panel data ------------------------------------------------------

enum class PanelSide { top, right };

enum class PlotType { scatter, scatterline, scattersmooth, smooth, bar, line, boxplot, dendrogram };

std::optional<PlotType> parse_plot_type(std::string_view name);
std::string_view to_string(PlotType type);

/// One value per matrix column (top) or row (right). Values are aligned by
/// position with the input matrix and are permuted along with it.
struct AdjacentSeries {
  PanelSide side = PanelSide::top;
  std::vector<std::optional<double>> values;
  PlotType plot_type = PlotType::scatter;
  std::string axis_name;
  std::vector<std::string> point_colors;  // empty, one shared color, or one per value
  double point_alpha = 1.0;
  std::vector<std::string> bar_colors;
  std::string line_color = "#000000";
  double smooth_span = 0.75;

  AdjacentSeries reordered(const Ordering& order) const;
  std::vector<double> present_values() const;
};

/// Two-column CSV (name,value). A header row is detected when its second
/// field is not numeric and not an NA token.
std::vector<std::optional<double>> load_series(const std::string& path,
                                               const CsvOptions& options = {});
std::vector<std::optional<double>> parse_series_csv(std::string_view text,
                                                    const CsvOptions& options = {});
/// Values of the named column of `m`.
std::vector<std::optional<double>> series_from_column(const LabeledMatrix& m,
                                                      const std::string& column);

// Shared CSV helpers.
std::vector<std::vector<std::string>> parse_csv_records(std::string_view text);
std::string csv_escape(std::string_view field);
std::string format_number(double v);
std::string read_file(const std::string& path);

}  // namespace supergrid
