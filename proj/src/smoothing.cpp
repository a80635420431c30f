#include "supergrid/smoothing.hpp"

#include <algorithm>

#include "supergrid/error.hpp"

namespace supergrid {

std::optional<SmoothStat> parse_smooth_stat(std::string_view name) {
  if (name == "median") return SmoothStat::median;
  if (name == "mean") return SmoothStat::mean;
  return std::nullopt;
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error("median of an empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / 2.0;
}

SmoothedMatrix smooth_by_cluster(const LabeledMatrix& m, const Membership& row_mem, const Membership& col_mem,
                                 SmoothStat stat) {
  if (row_mem.size() != m.rows()) {
    throw Error("row membership covers " + std::to_string(row_mem.size()) + " objects, matrix has " +
                std::to_string(m.rows()) + " rows");
  }
  if (col_mem.size() != m.cols()) {
    throw Error("column membership covers " + std::to_string(col_mem.size()) + " objects, matrix has " +
                std::to_string(m.cols()) + " columns");
  }
  const std::size_t kr = row_mem.k();
  const std::size_t kc = col_mem.k();
  std::vector<std::vector<double>> blocks(kr * kc);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (m.is_missing(r, c)) continue;
      blocks[row_mem[r] * kc + col_mem[c]].push_back(row[c]);
    }
  }
  SmoothedMatrix out{kr, kc, {}, row_mem, col_mem, m.rows(), m.cols()};
  out.block_values.reserve(kr * kc);
  for (auto& cells : blocks) {
    if (cells.empty()) {
      out.block_values.emplace_back(std::nullopt);
    } else if (stat == SmoothStat::median) {
      out.block_values.emplace_back(median(std::move(cells)));
    } else {
      double total = 0.0;
      for (double v : cells) total += v;
      out.block_values.emplace_back(total / static_cast<double>(cells.size()));
    }
  }
  return out;
}

std::optional<std::pair<double, double>> SmoothedMatrix::value_range() const {
  std::optional<std::pair<double, double>> range;
  for (const auto& v : block_values) {
    if (!v) continue;
    if (!range) {
      range = std::make_pair(*v, *v);
    } else {
      range->first = std::min(range->first, *v);
      range->second = std::max(range->second, *v);
    }
  }
  return range;
}

LabeledMatrix SmoothedMatrix::as_matrix() const {
  std::vector<std::string> rn, cn;
  for (std::size_t r = 0; r < k_rows; ++r) rn.push_back(row_membership.display_name(r));
  for (std::size_t c = 0; c < k_cols; ++c) cn.push_back(col_membership.display_name(c));
  return LabeledMatrix(k_rows, k_cols, block_values, std::move(rn), std::move(cn));
}

LabeledMatrix SmoothedMatrix::expanded(const std::vector<std::string>& row_names,
                                       const std::vector<std::string>& col_names) const {
  std::vector<std::optional<double>> cells;
  cells.reserve(source_rows * source_cols);
  for (std::size_t r = 0; r < source_rows; ++r)
    for (std::size_t c = 0; c < source_cols; ++c) cells.push_back(block(row_membership[r], col_membership[c]));
  return LabeledMatrix(source_rows, source_cols, cells, row_names, col_names);
}

}  // namespace supergrid
