#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "supergrid/clustering.hpp"
#include "supergrid/color.hpp"
#include "supergrid/matrix.hpp"
#include "supergrid/smoothing.hpp"

namespace supergrid {

enum class LabelMode { automatic, variable, cluster, none };
enum class TextAlign { left, center, right };
enum class AxisSide { left, right };

std::optional<LabelMode> parse_label_mode(std::string_view s);
std::optional<TextAlign> parse_text_align(std::string_view s);

struct LabelStyle {
  /// automatic: cluster names when the axis has a membership, else variable names.
  LabelMode mode = LabelMode::automatic;
  std::vector<std::string> background_colors;  // empty, one shared, or one per label
  double background_alpha = 1.0;
  double text_angle = 0.0;  // degrees, [0, 360)
  TextAlign alignment = TextAlign::center;
  double text_size = 10.0;
  std::string text_color = "#000000";
};

/// Declarative description of a whole figure. Memberships, dendrograms and
/// panel series refer to the matrix in its input order; prepare_figure()
/// applies orderings and aligns everything.
struct FigureSpec {
  std::vector<Rgb> palette = std::vector<Rgb>(viridis_table().begin(), viridis_table().end());
  std::optional<std::vector<double>> palette_breaks;
  Rgb na_color{255, 255, 255};

  std::optional<Ordering> row_order;
  std::optional<Ordering> col_order;
  std::optional<Membership> row_membership;
  std::optional<Membership> col_membership;
  std::optional<Dendrogram> row_dendrogram;
  std::optional<Dendrogram> col_dendrogram;
  bool smooth_heat = false;
  SmoothStat smooth_stat = SmoothStat::median;

  std::optional<AdjacentSeries> top_panel;
  std::optional<AdjacentSeries> right_panel;
  AxisSide top_axis_side = AxisSide::left;

  LabelStyle left_label;
  LabelStyle bottom_label;
  double label_padding = 4.0;

  std::optional<std::string> grid_hline_color;
  std::optional<std::string> grid_vline_color;
  double grid_line_width = 1.0;

  std::string row_title;
  std::string column_title;
  double title_size = 12.0;

  bool legend = true;
  double legend_height = 40.0;

  double width = 800.0;
  double height = 800.0;
  double plot_ratio = 0.30;
  double dendrogram_ratio = 0.15;
  double axis_text_size = 9.0;

  void validate() const;
};

/// Fixed-pitch text metrics: every code point advances 0.6 em, lines are
/// 1 em tall.
struct TextMetrics {
  static constexpr double advance_em = 0.6;
  static std::size_t code_points(std::string_view utf8);
  static double width(std::string_view utf8, double size);
  /// Axis-aligned bounding box of a text line rotated by `degrees`.
  static std::pair<double, double> rotated_box(std::string_view utf8, double size, double degrees);
};

struct Rect {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double right() const { return x + w; }
  double bottom() const { return y + h; }
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double mid() const { return lo + (hi - lo) / 2.0; }
  double size() const { return hi - lo; }
};

enum class PaneRole {
  heatmap,
  left_label,
  bottom_label,
  top_plot,
  right_plot,
  row_dendrogram,
  col_dendrogram,
  row_title,
  col_title,
  legend,
  top_axis,
  right_axis,
};

std::string_view to_string(PaneRole role);

struct Pane {
  PaneRole role;
  Rect rect;
  /// Per-column intervals for panes aligned with the heatmap columns and
  /// per-row intervals for panes aligned with its rows; the heatmap has both.
  std::vector<Interval> x_intervals;
  std::vector<Interval> y_intervals;
  /// Per-cluster intervals when that axis has a membership.
  std::vector<Interval> x_clusters;
  std::vector<Interval> y_clusters;
};

struct PanelLayout {
  double width = 0.0;
  double height = 0.0;
  std::vector<Pane> panes;

  const Pane* find(PaneRole role) const;
  const Pane& heatmap() const;
};

/// Equal partition of [start, start + length) into n intervals, or, with a
/// membership, one interval per cluster proportional to cluster size.
std::vector<Interval> axis_map(double start, double length, std::size_t n);
std::vector<Interval> axis_map(double start, double length, const Membership& membership);

/// Figure inputs after orderings are applied: rows and columns are grouped by
/// cluster (clusters appear in the order they first occur under the explicit
/// ordering, or in input order), dendrogram leaves are renumbered
/// to axis positions, and series are permuted alongside the matrix.
struct PreparedFigure {
  FigureSpec spec;
  LabeledMatrix matrix;
  std::optional<SmoothedMatrix> smoothed;
  Ordering row_order;
  Ordering col_order;
};

PreparedFigure prepare_figure(const FigureSpec& spec, const LabeledMatrix& m);

/// Geometry for an already prepared figure.
PanelLayout compute_layout(const PreparedFigure& fig);

struct Segment {
  double x1, y1, x2, y2;
};

enum class DendrogramSide { top, right };

/// Rectilinear dendrogram inside `pane`. Leaf i sits at the midpoint of
/// intervals[i]; heights scale so the tallest merge reaches the far edge.
std::vector<Segment> dendrogram_geometry(const Dendrogram& tree, const Rect& pane,
                                         const std::vector<Interval>& intervals, DendrogramSide side);

/// Label strings shown along one axis of a prepared figure (empty when hidden).
std::vector<std::string> axis_labels(const PreparedFigure& fig, Axis axis);

}  // namespace supergrid
