#include "supergrid/layout.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "supergrid/error.hpp"

namespace supergrid {

std::optional<LabelMode> parse_label_mode(std::string_view s) {
  if (s == "auto") return LabelMode::automatic;
  if (s == "variable") return LabelMode::variable;
  if (s == "cluster") return LabelMode::cluster;
  if (s == "none") return LabelMode::none;
  return std::nullopt;
}

std::optional<TextAlign> parse_text_align(std::string_view s) {
  if (s == "left") return TextAlign::left;
  if (s == "center") return TextAlign::center;
  if (s == "right") return TextAlign::right;
  return std::nullopt;
}

std::string_view to_string(PaneRole role) {
  switch (role) {
    case PaneRole::heatmap: return "heatmap";
    case PaneRole::left_label: return "left_label";
    case PaneRole::bottom_label: return "bottom_label";
    case PaneRole::top_plot: return "top_plot";
    case PaneRole::right_plot: return "right_plot";
    case PaneRole::row_dendrogram: return "row_dendrogram";
    case PaneRole::col_dendrogram: return "col_dendrogram";
    case PaneRole::row_title: return "row_title";
    case PaneRole::col_title: return "col_title";
    case PaneRole::legend: return "legend";
    case PaneRole::top_axis: return "top_axis";
    case PaneRole::right_axis: return "right_axis";
  }
  return "heatmap";
}

void FigureSpec::validate() const {
  if (palette.size() < 2) throw Error("palette needs at least two colors");
  if (palette_breaks && palette_breaks->size() != palette.size())
    throw Error("palette breaks must have one value per palette color");
  for (const LabelStyle* style : {&left_label, &bottom_label}) {
    if (!(style->text_angle >= 0.0 && style->text_angle < 360.0)) throw Error("label text angle must lie in [0, 360)");
    if (!(style->text_size > 0.0)) throw Error("label text size must be positive");
    if (!(style->background_alpha >= 0.0 && style->background_alpha <= 1.0))
      throw Error("label background alpha must lie in [0, 1]");
  }
  if (!(width > 0.0 && height > 0.0)) throw Error("canvas width and height must be positive");
  if (!(plot_ratio >= 0.0) || !(dendrogram_ratio >= 0.0)) throw Error("pane ratios must be non-negative");
  for (const auto* panel : {&top_panel, &right_panel}) {
    if (*panel && !((*panel)->point_alpha >= 0.0 && (*panel)->point_alpha <= 1.0))
      throw Error("point alpha must lie in [0, 1]");
  }
}

// Text metrics ------------------------------------------------------------------

std::size_t TextMetrics::code_points(std::string_view utf8) {
  std::size_t n = 0;
  for (unsigned char c : utf8)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

double TextMetrics::width(std::string_view utf8, double size) {
  return static_cast<double>(code_points(utf8)) * advance_em * size;
}

std::pair<double, double> TextMetrics::rotated_box(std::string_view utf8, double size, double degrees) {
  const double w = width(utf8, size);
  const double h = size;
  // Exact values at the right angles keep the common 0/90 cases free of
  // trigonometric rounding.
  double c = 0.0, s = 0.0;
  if (degrees == 0.0 || degrees == 180.0) {
    c = 1.0;
  } else if (degrees == 90.0 || degrees == 270.0) {
    s = 1.0;
  } else {
    const double rad = degrees * std::numbers::pi / 180.0;
    c = std::fabs(std::cos(rad));
    s = std::fabs(std::sin(rad));
  }
  return {w * c + h * s, w * s + h * c};
}

// Layout containers -----------------------------------------------------------------

const Pane* PanelLayout::find(PaneRole role) const {
  for (const auto& p : panes)
    if (p.role == role) return &p;
  return nullptr;
}

const Pane& PanelLayout::heatmap() const {
  const Pane* p = find(PaneRole::heatmap);
  if (!p) throw Error("layout has no heatmap pane");
  return *p;
}

namespace {

std::vector<Interval> partition(double start, double length, const std::vector<std::size_t>& weights) {
  if (weights.empty()) throw Error("axis map needs at least one index");
  std::size_t total = 0;
  for (std::size_t w : weights) total += w;
  std::vector<Interval> out(weights.size());
  std::size_t cum = 0;
  double lo = start;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    cum += weights[i];
    const double hi = cum == total ? start + length
                                   : start + length * (static_cast<double>(cum) / static_cast<double>(total));
    out[i] = Interval{lo, hi};
    lo = hi;
  }
  return out;
}

}  // namespace

std::vector<Interval> axis_map(double start, double length, std::size_t n) {
  if (n == 0) throw Error("axis map needs at least one index");
  return partition(start, length, std::vector<std::size_t>(n, 1));
}

std::vector<Interval> axis_map(double start, double length, const Membership& membership) {
  return partition(start, length, membership.cluster_sizes());
}

// Preparation ---------------------------------------------------------------------

namespace {

Ordering group_by_cluster(const Ordering& base, const Membership& mem) {
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> rank(mem.k(), unset);
  std::size_t next = 0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const std::size_t c = mem[base[i]];
    if (rank[c] == unset) rank[c] = next++;
  }
  std::vector<std::size_t> p = base.permutation();
  std::stable_sort(p.begin(), p.end(), [&](std::size_t a, std::size_t b) { return rank[mem[a]] < rank[mem[b]]; });
  return Ordering(base.axis(), std::move(p));
}

struct AxisPrep {
  Ordering order;
  std::optional<Membership> membership;
  std::optional<Dendrogram> dendrogram;
};

AxisPrep prepare_axis(Axis axis, std::size_t n, const std::optional<Ordering>& explicit_order,
                      const std::optional<Membership>& membership, const std::optional<Dendrogram>& tree) {
  const char* name = axis == Axis::row ? "row" : "column";
  if (explicit_order && explicit_order->size() != n)
    throw Error(std::string(name) + " ordering has " + std::to_string(explicit_order->size()) + " entries, axis has " +
                std::to_string(n));
  if (membership && membership->size() != n)
    throw Error(std::string(name) + " membership covers " + std::to_string(membership->size()) +
                " objects, axis has " + std::to_string(n));
  if (tree && tree->leaf_count() != n)
    throw Error(std::string(name) + " dendrogram has " + std::to_string(tree->leaf_count()) + " leaves, axis has " +
                std::to_string(n));

  Ordering order = explicit_order ? Ordering(axis, explicit_order->permutation()) : Ordering::identity(axis, n);
  if (tree) order = Ordering(axis, tree->leaf_order());
  if (membership) {
    Ordering grouped = group_by_cluster(order, *membership);
    if (tree && grouped != order)
      throw Error(std::string(name) + " membership clusters are not contiguous in the dendrogram leaf order");
    order = std::move(grouped);
  }
  AxisPrep out{order, std::nullopt, std::nullopt};
  if (membership) {
    // Keep the caller's cluster names through the relabeling.
    Membership named = *membership;
    if (named.label_names().empty()) {
      std::vector<std::string> names;
      for (std::size_t c = 0; c < named.k(); ++c) names.push_back(named.display_name(c));
      named = named.with_label_names(std::move(names));
    }
    out.membership = named.reordered(order).canonical();
  }
  if (tree) out.dendrogram = tree->relabeled(order);
  return out;
}

}  // namespace

PreparedFigure prepare_figure(const FigureSpec& spec, const LabeledMatrix& m) {
  spec.validate();
  if (spec.top_panel && spec.top_panel->values.size() != m.cols())
    throw Error("top panel has " + std::to_string(spec.top_panel->values.size()) + " values, matrix has " +
                std::to_string(m.cols()) + " columns");
  if (spec.right_panel && spec.right_panel->values.size() != m.rows())
    throw Error("right panel has " + std::to_string(spec.right_panel->values.size()) + " values, matrix has " +
                std::to_string(m.rows()) + " rows");

  AxisPrep rows = prepare_axis(Axis::row, m.rows(), spec.row_order, spec.row_membership, spec.row_dendrogram);
  AxisPrep cols = prepare_axis(Axis::column, m.cols(), spec.col_order, spec.col_membership, spec.col_dendrogram);

  PreparedFigure fig{spec, apply_ordering(m, rows.order, cols.order), std::nullopt, rows.order, cols.order};
  fig.spec.row_order = rows.order;
  fig.spec.col_order = cols.order;
  fig.spec.row_membership = rows.membership;
  fig.spec.col_membership = cols.membership;
  fig.spec.row_dendrogram = rows.dendrogram;
  fig.spec.col_dendrogram = cols.dendrogram;
  if (spec.top_panel) fig.spec.top_panel = spec.top_panel->reordered(cols.order);
  if (spec.right_panel) fig.spec.right_panel = spec.right_panel->reordered(rows.order);
  // Per-variable label backgrounds travel with their rows/columns.
  for (auto [style, order] : {std::pair{&fig.spec.left_label, &rows.order}, std::pair{&fig.spec.bottom_label, &cols.order}}) {
    if (style->background_colors.size() > 1 && style->background_colors.size() == order->size())
      style->background_colors = permute(style->background_colors, *order);
  }

  for (const auto* panel : {&fig.spec.top_panel, &fig.spec.right_panel}) {
    if (!*panel) continue;
    const bool top = panel == &fig.spec.top_panel;
    const char* label = top ? "top panel" : "right panel";
    if ((*panel)->plot_type == PlotType::dendrogram && !(top ? fig.spec.col_dendrogram : fig.spec.row_dendrogram))
      throw Error(std::string(label) + " plots a dendrogram but that axis has none");
    if ((*panel)->plot_type == PlotType::boxplot && !(top ? fig.spec.col_membership : fig.spec.row_membership))
      throw Error(std::string(label) + " boxplot needs a membership on that axis");
    const auto& values = (*panel)->values;
    for (const auto* colors : {&(*panel)->point_colors, &(*panel)->bar_colors}) {
      if (colors->size() > 1 && colors->size() != values.size())
        throw Error(std::string(label) + " color list has " + std::to_string(colors->size()) + " entries, expected 1 or " +
                    std::to_string(values.size()));
    }
  }

  if (spec.smooth_heat) {
    const Membership rm = fig.spec.row_membership.value_or(Membership::singletons(m.rows()));
    const Membership cm = fig.spec.col_membership.value_or(Membership::singletons(m.cols()));
    fig.smoothed = smooth_by_cluster(fig.matrix, rm, cm, spec.smooth_stat);
  }
  return fig;
}

std::vector<std::string> axis_labels(const PreparedFigure& fig, Axis axis) {
  const LabelStyle& style = axis == Axis::row ? fig.spec.left_label : fig.spec.bottom_label;
  const auto& mem = axis == Axis::row ? fig.spec.row_membership : fig.spec.col_membership;
  LabelMode mode = style.mode;
  if (mode == LabelMode::automatic) mode = mem ? LabelMode::cluster : LabelMode::variable;
  if (mode == LabelMode::none) return {};
  if (mode == LabelMode::cluster && mem) {
    std::vector<std::string> out;
    for (std::size_t c = 0; c < mem->k(); ++c) out.push_back(mem->display_name(c));
    return out;
  }
  return axis == Axis::row ? fig.matrix.row_names() : fig.matrix.col_names();
}

// Layout ---------------------------------------------------------------------------

namespace {

double label_extent(const std::vector<std::string>& labels, const LabelStyle& style, bool horizontal_extent,
                    double padding) {
  if (labels.empty()) return 0.0;
  double best = 0.0;
  for (const auto& l : labels) {
    const auto [w, h] = TextMetrics::rotated_box(l, style.text_size, style.text_angle);
    best = std::max(best, horizontal_extent ? w : h);
  }
  return best + 2.0 * padding;
}

}  // namespace

PanelLayout compute_layout(const PreparedFigure& fig) {
  const FigureSpec& s = fig.spec;
  const double pad = s.label_padding;

  const auto row_labels = axis_labels(fig, Axis::row);
  const auto col_labels = axis_labels(fig, Axis::column);
  const double left_w = label_extent(row_labels, s.left_label, true, pad);
  const double bottom_h = label_extent(col_labels, s.bottom_label, false, pad);
  const double row_title_w = s.row_title.empty() ? 0.0 : s.title_size + 2.0 * pad;
  const double col_title_h = s.column_title.empty() ? 0.0 : s.title_size + 2.0 * pad;
  const double legend_h = s.legend ? s.legend_height : 0.0;

  const bool has_top = s.top_panel.has_value();
  const bool has_right = s.right_panel.has_value();
  // Axis strips: tick labels of up to 7 characters, tick marks, axis name.
  const double tick = 4.0;
  const double top_axis_w = has_top ? 7.0 * TextMetrics::advance_em * s.axis_text_size + tick + s.axis_text_size + 3.0 * pad : 0.0;
  const double right_axis_h = has_right ? 2.0 * s.axis_text_size + tick + 3.0 * pad : 0.0;

  double left_w_total = row_title_w + left_w;
  double right_axis_need = 0.0;
  if (has_top) {
    if (s.top_axis_side == AxisSide::left) left_w_total = std::max(left_w_total, top_axis_w);
    else right_axis_need = top_axis_w;
  }
  const double bottom_fixed = std::max(bottom_h + col_title_h, right_axis_h);

  const double hr = (has_right ? s.plot_ratio : 0.0) + (s.row_dendrogram ? s.dendrogram_ratio : 0.0);
  const double vr = (has_top ? s.plot_ratio : 0.0) + (s.col_dendrogram ? s.dendrogram_ratio : 0.0);

  double heat_w = (s.width - left_w_total) / (1.0 + hr);
  if (hr * heat_w < right_axis_need) heat_w = s.width - left_w_total - right_axis_need;
  const double heat_h = (s.height - bottom_fixed - legend_h) / (1.0 + vr);
  if (!(heat_w > 0.0) || !(heat_h > 0.0))
    throw Error("no canvas area remains for the heatmap (labels, titles or legend are too large)");

  const double right_plot_w = has_right ? s.plot_ratio * heat_w : 0.0;
  const double row_dendro_w = s.row_dendrogram ? s.dendrogram_ratio * heat_w : 0.0;
  const double top_plot_h = has_top ? s.plot_ratio * heat_h : 0.0;
  const double col_dendro_h = s.col_dendrogram ? s.dendrogram_ratio * heat_h : 0.0;

  const Rect heat{left_w_total, col_dendro_h + top_plot_h, heat_w, heat_h};
  const std::size_t n_rows = fig.matrix.rows();
  const std::size_t n_cols = fig.matrix.cols();

  auto col_intervals = [&] { return axis_map(heat.x, heat.w, n_cols); };
  auto row_intervals = [&] { return axis_map(heat.y, heat.h, n_rows); };
  auto col_clusters = [&] {
    return s.col_membership ? axis_map(heat.x, heat.w, *s.col_membership) : std::vector<Interval>{};
  };
  auto row_clusters = [&] {
    return s.row_membership ? axis_map(heat.y, heat.h, *s.row_membership) : std::vector<Interval>{};
  };

  PanelLayout out{s.width, s.height, {}};
  auto horizontal = [&](PaneRole role, Rect r) {
    out.panes.push_back(Pane{role, r, col_intervals(), {}, col_clusters(), {}});
  };
  auto vertical = [&](PaneRole role, Rect r) {
    out.panes.push_back(Pane{role, r, {}, row_intervals(), {}, row_clusters()});
  };
  auto plain = [&](PaneRole role, Rect r) { out.panes.push_back(Pane{role, r, {}, {}, {}, {}}); };

  out.panes.push_back(Pane{PaneRole::heatmap, heat, col_intervals(), row_intervals(), col_clusters(), row_clusters()});
  if (col_dendro_h > 0.0) horizontal(PaneRole::col_dendrogram, Rect{heat.x, 0.0, heat.w, col_dendro_h});
  if (top_plot_h > 0.0) {
    const Rect top{heat.x, col_dendro_h, heat.w, top_plot_h};
    horizontal(PaneRole::top_plot, top);
    const double ax = s.top_axis_side == AxisSide::left ? heat.x - top_axis_w : heat.right();
    plain(PaneRole::top_axis, Rect{ax, top.y, top_axis_w, top.h});
  }
  if (right_plot_w > 0.0) {
    const Rect right{heat.right(), heat.y, right_plot_w, heat.h};
    vertical(PaneRole::right_plot, right);
    plain(PaneRole::right_axis, Rect{right.x, heat.bottom(), right.w, right_axis_h});
  }
  if (row_dendro_w > 0.0)
    vertical(PaneRole::row_dendrogram, Rect{heat.right() + right_plot_w, heat.y, row_dendro_w, heat.h});
  if (left_w > 0.0) vertical(PaneRole::left_label, Rect{heat.x - left_w, heat.y, left_w, heat.h});
  if (row_title_w > 0.0) plain(PaneRole::row_title, Rect{heat.x - left_w - row_title_w, heat.y, row_title_w, heat.h});
  if (bottom_h > 0.0) horizontal(PaneRole::bottom_label, Rect{heat.x, heat.bottom(), heat.w, bottom_h});
  if (col_title_h > 0.0) plain(PaneRole::col_title, Rect{heat.x, heat.bottom() + bottom_h, heat.w, col_title_h});
  if (legend_h > 0.0) plain(PaneRole::legend, Rect{heat.x, s.height - legend_h, heat.w, legend_h});
  return out;
}

// Dendrogram geometry -------------------------------------------------------------------

std::vector<Segment> dendrogram_geometry(const Dendrogram& tree, const Rect& pane, const std::vector<Interval>& intervals,
                                         DendrogramSide side) {
  const std::size_t n = tree.leaf_count();
  if (intervals.size() != n)
    throw Error("dendrogram has " + std::to_string(n) + " leaves, axis has " + std::to_string(intervals.size()) +
                " positions");
  const double max_h = tree.max_height();
  const double depth = side == DendrogramSide::top ? pane.h : pane.w;
  auto scaled = [&](double h) { return max_h > 0.0 ? depth * (h / max_h) : depth; };

  std::vector<double> pos(2 * n - 1), level(2 * n - 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) pos[i] = intervals[i].mid();

  std::vector<Segment> out;
  out.reserve(3 * tree.merges().size());
  auto emit = [&](double p1, double d1, double p2, double d2) {
    if (side == DendrogramSide::top) {
      const double base = pane.y + pane.h;
      out.push_back(Segment{p1, base - d1, p2, base - d2});
    } else {
      out.push_back(Segment{pane.x + d1, p1, pane.x + d2, p2});
    }
  };
  for (std::size_t t = 0; t < tree.merges().size(); ++t) {
    const Merge& m = tree.merges()[t];
    const std::size_t id = n + t;
    const double d = scaled(m.height);
    emit(pos[m.left], level[m.left], pos[m.left], d);
    emit(pos[m.left], d, pos[m.right], d);
    emit(pos[m.right], d, pos[m.right], level[m.right]);
    pos[id] = pos[m.left] + (pos[m.right] - pos[m.left]) / 2.0;
    level[id] = d;
  }
  return out;
}

}  // namespace supergrid
