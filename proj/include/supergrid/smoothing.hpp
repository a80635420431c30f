#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "supergrid/clustering.hpp"
#include "supergrid/matrix.hpp"

namespace supergrid {

enum class SmoothStat { median, mean };
std::optional<SmoothStat> parse_smooth_stat(std::string_view name);

/// Heatmap aggregated to one value per (row cluster, column cluster) block.
struct SmoothedMatrix {
  std::size_t k_rows = 0;
  std::size_t k_cols = 0;
  std::vector<std::optional<double>> block_values;  // k_rows x k_cols, row-major
  Membership row_membership;
  Membership col_membership;
  std::size_t source_rows = 0;
  std::size_t source_cols = 0;

  std::optional<double> block(std::size_t r, std::size_t c) const { return block_values[r * k_cols + c]; }
  std::optional<std::pair<double, double>> value_range() const;

  /// Block values as a labeled matrix named by cluster display names.
  LabeledMatrix as_matrix() const;
  /// Cell-level matrix where every cell carries its block's value.
  LabeledMatrix expanded(const std::vector<std::string>& row_names,
                         const std::vector<std::string>& col_names) const;
};

/// Median of the values (mean of the two middle values for even counts).
double median(std::vector<double> values);

/// Each block becomes the chosen statistic of its present cells; blocks with
/// no present cells are missing.
SmoothedMatrix smooth_by_cluster(const LabeledMatrix& m, const Membership& row_mem, const Membership& col_mem,
                                 SmoothStat stat = SmoothStat::median);

}  // namespace supergrid
