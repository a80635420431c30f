#include "supergrid/render.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "supergrid/error.hpp"

namespace supergrid {

// Statistics helpers ------------------------------------------------------------

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error("quantile of an empty set");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double f = pos - static_cast<double>(lo);
  if (f == 0.0) return sorted[lo];
  return sorted[lo] + (sorted[hi] - sorted[lo]) * f;
}

BoxplotStats boxplot_stats(std::vector<double> values) {
  if (values.empty()) throw Error("boxplot of an empty set");
  std::sort(values.begin(), values.end());
  BoxplotStats s;
  s.q1 = quantile_sorted(values, 0.25);
  s.median = quantile_sorted(values, 0.5);
  s.q3 = quantile_sorted(values, 0.75);
  const double iqr = s.q3 - s.q1;
  const double lo_fence = s.q1 - 1.5 * iqr;
  const double hi_fence = s.q3 + 1.5 * iqr;
  s.whisker_low = s.q1;
  s.whisker_high = s.q3;
  for (double v : values) {
    if (v >= lo_fence && v <= hi_fence) {
      s.whisker_low = std::min(s.whisker_low, v);
      s.whisker_high = std::max(s.whisker_high, v);
    } else {
      s.outliers.push_back(v);
    }
  }
  return s;
}

std::vector<double> loess_smooth(std::span<const double> x, std::span<const double> y, double span) {
  if (x.size() != y.size()) throw Error("loess: x and y differ in length");
  if (!(span > 0.0)) throw Error("loess: span must be positive");
  const std::size_t n = x.size();
  std::vector<double> out(n);
  if (n == 0) return out;
  const std::size_t q = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(span * static_cast<double>(n))), 1, n);
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) dist[j] = std::fabs(x[j] - x[i]);
    std::vector<double> sorted = dist;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(q - 1), sorted.end());
    double h = sorted[q - 1];
    // Spans wider than the data stretch the bandwidth.
    if (span > 1.0) h *= span;
    double sw = 0.0, swx = 0.0, swy = 0.0, swxx = 0.0, swxy = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double w = 0.0;
      if (h > 0.0) {
        const double u = dist[j] / h;
        if (u < 1.0) {
          const double t = 1.0 - u * u * u;
          w = t * t * t;
        }
      } else {
        w = dist[j] == 0.0 ? 1.0 : 0.0;
      }
      sw += w;
      swx += w * x[j];
      swy += w * y[j];
      swxx += w * x[j] * x[j];
      swxy += w * x[j] * y[j];
    }
    if (sw <= 0.0) {
      out[i] = y[i];
      continue;
    }
    const double mx = swx / sw;
    const double my = swy / sw;
    const double var = swxx / sw - mx * mx;
    if (var <= 1e-12 * (1.0 + mx * mx)) {
      out[i] = my;
    } else {
      const double slope = (swxy / sw - mx * my) / var;
      out[i] = my + slope * (x[i] - mx);
    }
  }
  return out;
}

// SVG writer ----------------------------------------------------------------------

std::string svg_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 4);
  std::string s(buf, ptr);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

SvgWriter::SvgWriter(double width, double height) {
  out_ = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + svg_number(width) + "\" height=\"" +
          svg_number(height) + "\" viewBox=\"0 0 " + svg_number(width) + " " + svg_number(height) +
          "\" font-family=\"monospace\">\n";
}

void SvgWriter::write_attrs(std::initializer_list<Attr> attrs) {
  for (const auto& [k, v] : attrs) {
    out_ += ' ';
    out_ += k;
    out_ += "=\"";
    out_ += xml_escape(v);
    out_ += '"';
  }
}

void SvgWriter::open(std::string_view tag, std::initializer_list<Attr> attrs) {
  out_.append(static_cast<std::size_t>(depth_) * 2, ' ');
  out_ += '<';
  out_ += tag;
  write_attrs(attrs);
  out_ += ">\n";
  ++depth_;
}

void SvgWriter::close(std::string_view tag) {
  --depth_;
  out_.append(static_cast<std::size_t>(depth_) * 2, ' ');
  out_ += "</";
  out_ += tag;
  out_ += ">\n";
}

void SvgWriter::element(std::string_view tag, std::initializer_list<Attr> attrs) {
  out_.append(static_cast<std::size_t>(depth_) * 2, ' ');
  out_ += '<';
  out_ += tag;
  write_attrs(attrs);
  out_ += "/>\n";
}

void SvgWriter::text(std::initializer_list<Attr> attrs, std::string_view content) {
  out_.append(static_cast<std::size_t>(depth_) * 2, ' ');
  out_ += "<text";
  write_attrs(attrs);
  out_ += '>';
  out_ += xml_escape(content);
  out_ += "</text>\n";
}

std::string SvgWriter::finish() {
  out_ += "</svg>\n";
  return std::move(out_);
}

// Scene rendering ----------------------------------------------------------------

namespace {

using A = SvgWriter;

std::string format_tick(double v) {
  if (std::fabs(v) < 1e-12) v = 0.0;
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 3);
  return std::string(buf, ptr);
}

Rgba resolve_color(const std::vector<std::string>& colors, std::size_t i, std::string_view fallback) {
  std::string_view name = fallback;
  if (colors.size() == 1) name = colors[0];
  else if (i < colors.size()) name = colors[i];
  const auto c = parse_color(name);
  if (!c) throw Error("unknown color '" + std::string(name) + "'");
  return *c;
}

struct ValueScale {
  double lo;
  double hi;
};

ValueScale series_scale(const AdjacentSeries& s, const std::optional<Membership>& mem) {
  const auto values = s.present_values();
  double lo = 0.0, hi = 1.0;
  if (!values.empty()) {
    lo = *std::min_element(values.begin(), values.end());
    hi = *std::max_element(values.begin(), values.end());
  }
  if (s.plot_type == PlotType::bar) {
    lo = std::min(lo, 0.0);
    hi = std::max(hi, 0.0);
  }
  (void)mem;
  if (hi == lo) {
    const double pad = lo == 0.0 ? 0.5 : std::fabs(lo) * 0.1;
    lo -= pad;
    hi += pad;
  }
  const double pad = 0.05 * (hi - lo);
  if (!(s.plot_type == PlotType::bar && lo == 0.0)) lo -= pad;
  if (!(s.plot_type == PlotType::bar && hi == 0.0)) hi += pad;
  return {lo, hi};
}

// Maps a value to the depth coordinate of a top (grows upward) or right
// (grows rightward) pane.
struct DepthMap {
  Rect pane;
  bool top;
  ValueScale scale;

  double operator()(double v) const {
    const double t = (v - scale.lo) / (scale.hi - scale.lo);
    return top ? pane.bottom() - t * pane.h : pane.x + t * pane.w;
  }
};

class SceneRenderer {
 public:
  SceneRenderer(const PanelLayout& layout, const PreparedFigure& fig) : layout_(layout), fig_(fig), svg_(layout.width, layout.height) {}

  void validate() const {
    const Pane& heat = layout_.heatmap();
    const auto& m = fig_.matrix;
    if (heat.x_intervals.size() != m.cols() || heat.y_intervals.size() != m.rows())
      throw Error("heatmap pane geometry does not match the matrix dimensions");
    if (fig_.smoothed) {
      if (fig_.smoothed->source_rows != m.rows() || fig_.smoothed->source_cols != m.cols())
        throw Error("smoothed matrix does not match the matrix dimensions");
      if (block_x().size() != fig_.smoothed->k_cols || block_y().size() != fig_.smoothed->k_rows)
        throw Error("heatmap pane geometry does not match the smoothed block counts");
    }
    const FigureSpec& s = fig_.spec;
    if (s.top_panel) {
      const Pane* p = layout_.find(PaneRole::top_plot);
      if (!p || p->x_intervals.size() != s.top_panel->values.size())
        throw Error("top panel data does not match its pane");
    }
    if (s.right_panel) {
      const Pane* p = layout_.find(PaneRole::right_plot);
      if (!p || p->y_intervals.size() != s.right_panel->values.size())
        throw Error("right panel data does not match its pane");
    }
    if (s.col_dendrogram && s.col_dendrogram->leaf_count() != m.cols())
      throw Error("column dendrogram does not match the matrix columns");
    if (s.row_dendrogram && s.row_dendrogram->leaf_count() != m.rows())
      throw Error("row dendrogram does not match the matrix rows");
    for (const auto* color : {&s.grid_hline_color, &s.grid_vline_color})
      if (*color && !parse_color(**color)) throw Error("unknown grid color '" + **color + "'");
  }

  std::string run() {
    validate();
    const ColorScale scale = color_scale();
    svg_.element("rect", {A::str("class", "background"), A::num("x", 0), A::num("y", 0), A::num("width", layout_.width),
                          A::num("height", layout_.height), A::str("fill", "#FFFFFF")});
    cells(scale);
    grid();
    if (const Pane* p = layout_.find(PaneRole::col_dendrogram)) dendrogram(*fig_.spec.col_dendrogram, *p, true, "col_dendrogram");
    if (const Pane* p = layout_.find(PaneRole::top_plot)) panel(*fig_.spec.top_panel, *p, true);
    if (const Pane* p = layout_.find(PaneRole::top_axis)) top_axis(*p);
    if (const Pane* p = layout_.find(PaneRole::right_plot)) panel(*fig_.spec.right_panel, *p, false);
    if (const Pane* p = layout_.find(PaneRole::right_axis)) right_axis(*p);
    if (const Pane* p = layout_.find(PaneRole::row_dendrogram)) dendrogram(*fig_.spec.row_dendrogram, *p, false, "row_dendrogram");
    if (const Pane* p = layout_.find(PaneRole::left_label)) labels(*p, Axis::row);
    if (const Pane* p = layout_.find(PaneRole::bottom_label)) labels(*p, Axis::column);
    if (const Pane* p = layout_.find(PaneRole::row_title)) title(*p, fig_.spec.row_title, true);
    if (const Pane* p = layout_.find(PaneRole::col_title)) title(*p, fig_.spec.column_title, false);
    if (const Pane* p = layout_.find(PaneRole::legend)) legend(*p, scale);
    return svg_.finish();
  }

 private:
  const std::vector<Interval>& block_x() const {
    const Pane& heat = layout_.heatmap();
    return fig_.spec.col_membership ? heat.x_clusters : heat.x_intervals;
  }
  const std::vector<Interval>& block_y() const {
    const Pane& heat = layout_.heatmap();
    return fig_.spec.row_membership ? heat.y_clusters : heat.y_intervals;
  }

  ColorScale color_scale() const {
    const FigureSpec& s = fig_.spec;
    if (s.palette_breaks) return ColorScale(s.palette, *s.palette_breaks, s.na_color);
    const auto range = fig_.smoothed ? fig_.smoothed->value_range() : fig_.matrix.value_range();
    const auto [lo, hi] = range.value_or(std::make_pair(0.0, 0.0));
    return ColorScale(s.palette, s.na_color, lo, hi);
  }

  void cells(const ColorScale& scale) {
    svg_.open("g", {A::str("id", "heatmap")});
    const Pane& heat = layout_.heatmap();
    if (fig_.smoothed) {
      const auto& sm = *fig_.smoothed;
      const auto& xs = block_x();
      const auto& ys = block_y();
      for (std::size_t r = 0; r < sm.k_rows; ++r)
        for (std::size_t c = 0; c < sm.k_cols; ++c) cell(xs[c], ys[r], map_color(sm.block(r, c), scale));
    } else {
      const auto& m = fig_.matrix;
      for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) cell(heat.x_intervals[c], heat.y_intervals[r], map_color(m.at(r, c), scale));
    }
    svg_.close("g");
  }

  void cell(const Interval& x, const Interval& y, Rgb fill) {
    svg_.element("rect", {A::str("class", "cell"), A::num("x", x.lo), A::num("y", y.lo), A::num("width", x.size()),
                          A::num("height", y.size()), A::str("fill", to_hex(fill))});
  }

  void grid() {
    const FigureSpec& s = fig_.spec;
    if (!s.grid_hline_color && !s.grid_vline_color) return;
    const Pane& heat = layout_.heatmap();
    const Rect& r = heat.rect;
    svg_.open("g", {A::str("id", "grid")});
    if (s.grid_vline_color) {
      const std::string color = to_hex(parse_color(*s.grid_vline_color)->rgb);
      const auto& xs = s.col_membership ? heat.x_clusters : heat.x_intervals;
      for (std::size_t i = 1; i < xs.size(); ++i)
        svg_.element("line", {A::str("class", "grid"), A::num("x1", xs[i].lo), A::num("y1", r.y), A::num("x2", xs[i].lo),
                              A::num("y2", r.bottom()), A::str("stroke", color), A::num("stroke-width", s.grid_line_width)});
    }
    if (s.grid_hline_color) {
      const std::string color = to_hex(parse_color(*s.grid_hline_color)->rgb);
      const auto& ys = s.row_membership ? heat.y_clusters : heat.y_intervals;
      for (std::size_t i = 1; i < ys.size(); ++i)
        svg_.element("line", {A::str("class", "grid"), A::num("x1", r.x), A::num("y1", ys[i].lo), A::num("x2", r.right()),
                              A::num("y2", ys[i].lo), A::str("stroke", color), A::num("stroke-width", s.grid_line_width)});
    }
    svg_.close("g");
  }

  void segments(const std::vector<Segment>& segs, std::string_view cls) {
    for (const auto& g : segs)
      svg_.element("line", {A::str("class", std::string(cls)), A::num("x1", g.x1), A::num("y1", g.y1), A::num("x2", g.x2),
                            A::num("y2", g.y2), A::str("stroke", "#000000"), A::num("stroke-width", 1)});
  }

  void dendrogram(const Dendrogram& tree, const Pane& pane, bool top, std::string_view id) {
    svg_.open("g", {A::str("id", std::string(id))});
    const auto& intervals = top ? pane.x_intervals : pane.y_intervals;
    segments(dendrogram_geometry(tree, pane.rect, intervals, top ? DendrogramSide::top : DendrogramSide::right), "dendrogram");
    svg_.close("g");
  }

  void panel(const AdjacentSeries& series, const Pane& pane, bool top) {
    svg_.open("g", {A::str("id", top ? "top_plot" : "right_plot")});
    if (series.plot_type == PlotType::dendrogram) {
      const Dendrogram& tree = top ? *fig_.spec.col_dendrogram : *fig_.spec.row_dendrogram;
      const auto& intervals = top ? pane.x_intervals : pane.y_intervals;
      segments(dendrogram_geometry(tree, pane.rect, intervals, top ? DendrogramSide::top : DendrogramSide::right), "dendrogram");
      svg_.close("g");
      return;
    }
    const auto& mem = top ? fig_.spec.col_membership : fig_.spec.row_membership;
    const DepthMap depth{pane.rect, top, series_scale(series, mem)};
    const auto& slots = top ? pane.x_intervals : pane.y_intervals;

    auto point_xy = [&](std::size_t i, double v) {
      const double along = slots[i].mid();
      const double d = depth(v);
      return top ? std::make_pair(along, d) : std::make_pair(d, along);
    };

    std::vector<std::size_t> present;
    for (std::size_t i = 0; i < series.values.size(); ++i)
      if (series.values[i]) present.push_back(i);

    auto polyline = [&](const std::vector<std::pair<double, double>>& pts, std::string_view cls) {
      if (pts.size() < 2) return;
      std::string points;
      for (const auto& [x, y] : pts) {
        if (!points.empty()) points += ' ';
        points += svg_number(x) + "," + svg_number(y);
      }
      const auto color = resolve_color({}, 0, series.line_color);
      svg_.element("polyline", {A::str("class", std::string(cls)), A::str("points", points), A::str("fill", "none"),
                                A::str("stroke", to_hex(color.rgb)), A::num("stroke-width", 1.5)});
    };
    auto points = [&] {
      double min_slot = std::numeric_limits<double>::infinity();
      for (const auto& s : slots) min_slot = std::min(min_slot, s.size());
      const double radius = std::clamp(0.4 * min_slot, 1.0, 4.0);
      for (std::size_t i : present) {
        const auto [x, y] = point_xy(i, *series.values[i]);
        const Rgba c = resolve_color(series.point_colors, i, "#000000");
        svg_.element("circle", {A::str("class", "point"), A::num("cx", x), A::num("cy", y), A::num("r", radius),
                                A::str("fill", to_hex(c.rgb)), A::num("fill-opacity", c.alpha * series.point_alpha)});
      }
    };
    auto raw_line = [&](std::string_view cls) {
      std::vector<std::pair<double, double>> pts;
      for (std::size_t i : present) pts.push_back(point_xy(i, *series.values[i]));
      polyline(pts, cls);
    };
    auto smooth_line = [&] {
      std::vector<double> xs, ys;
      for (std::size_t i : present) {
        xs.push_back(slots[i].mid());
        ys.push_back(*series.values[i]);
      }
      const auto fitted = loess_smooth(xs, ys, series.smooth_span);
      std::vector<std::pair<double, double>> pts;
      for (std::size_t j = 0; j < xs.size(); ++j) {
        const double d = depth(fitted[j]);
        pts.push_back(top ? std::make_pair(xs[j], d) : std::make_pair(d, xs[j]));
      }
      polyline(pts, "smooth");
    };

    switch (series.plot_type) {
      case PlotType::scatter: points(); break;
      case PlotType::line: raw_line("line"); break;
      case PlotType::scatterline:
        raw_line("line");
        points();
        break;
      case PlotType::smooth: smooth_line(); break;
      case PlotType::scattersmooth:
        points();
        smooth_line();
        break;
      case PlotType::bar: bars(series, slots, depth, top, present); break;
      case PlotType::boxplot: boxplots(series, top ? pane.x_clusters : pane.y_clusters, *mem, depth, top); break;
      case PlotType::dendrogram: break;
    }
    svg_.close("g");
  }

  void bars(const AdjacentSeries& series, const std::vector<Interval>& slots, const DepthMap& depth, bool top,
            const std::vector<std::size_t>& present) {
    const double base = depth(0.0);
    for (std::size_t i : present) {
      const double v = depth(*series.values[i]);
      const Interval& slot = slots[i];
      const double gap = 0.05 * slot.size();
      const Rgba c = resolve_color(series.bar_colors, i, "#808080");
      const double d_lo = std::min(base, v);
      const double d_len = std::fabs(v - base);
      if (top) {
        svg_.element("rect", {A::str("class", "bar"), A::num("x", slot.lo + gap), A::num("y", d_lo),
                              A::num("width", slot.size() - 2 * gap), A::num("height", d_len), A::str("fill", to_hex(c.rgb)),
                              A::num("fill-opacity", c.alpha)});
      } else {
        svg_.element("rect", {A::str("class", "bar"), A::num("x", d_lo), A::num("y", slot.lo + gap), A::num("width", d_len),
                              A::num("height", slot.size() - 2 * gap), A::str("fill", to_hex(c.rgb)),
                              A::num("fill-opacity", c.alpha)});
      }
    }
  }

  void boxplots(const AdjacentSeries& series, const std::vector<Interval>& clusters, const Membership& mem,
                const DepthMap& depth, bool top) {
    const auto groups = mem.members();
    const Rgba fill = resolve_color(series.bar_colors, 0, "#D3D3D3");
    auto line = [&](double a1, double d1, double a2, double d2, std::string_view cls) {
      if (top)
        svg_.element("line", {A::str("class", std::string(cls)), A::num("x1", a1), A::num("y1", d1), A::num("x2", a2),
                              A::num("y2", d2), A::str("stroke", "#000000"), A::num("stroke-width", 1)});
      else
        svg_.element("line", {A::str("class", std::string(cls)), A::num("x1", d1), A::num("y1", a1), A::num("x2", d2),
                              A::num("y2", a2), A::str("stroke", "#000000"), A::num("stroke-width", 1)});
    };
    for (std::size_t c = 0; c < groups.size(); ++c) {
      std::vector<double> values;
      for (std::size_t i : groups[c])
        if (series.values[i]) values.push_back(*series.values[i]);
      if (values.empty()) continue;
      const BoxplotStats st = boxplot_stats(values);
      const Interval& slot = clusters[c];
      const double half = 0.3 * slot.size();
      const double mid = slot.mid();
      const double d1 = depth(st.q1), d3 = depth(st.q3);
      const double d_lo = std::min(d1, d3), d_len = std::fabs(d3 - d1);
      if (top)
        svg_.element("rect", {A::str("class", "box"), A::num("x", mid - half), A::num("y", d_lo), A::num("width", 2 * half),
                              A::num("height", d_len), A::str("fill", to_hex(fill.rgb)), A::str("stroke", "#000000")});
      else
        svg_.element("rect", {A::str("class", "box"), A::num("x", d_lo), A::num("y", mid - half), A::num("width", d_len),
                              A::num("height", 2 * half), A::str("fill", to_hex(fill.rgb)), A::str("stroke", "#000000")});
      line(mid - half, depth(st.median), mid + half, depth(st.median), "median");
      line(mid, d3, mid, depth(st.whisker_high), "whisker");
      line(mid, d1, mid, depth(st.whisker_low), "whisker");
      line(mid - half / 2, depth(st.whisker_high), mid + half / 2, depth(st.whisker_high), "whisker");
      line(mid - half / 2, depth(st.whisker_low), mid + half / 2, depth(st.whisker_low), "whisker");
      for (double o : st.outliers) {
        const double d = depth(o);
        svg_.element("circle", {A::str("class", "outlier"), A::num("cx", top ? mid : d), A::num("cy", top ? d : mid),
                                A::num("r", 1.5), A::str("fill", "none"), A::str("stroke", "#000000")});
      }
    }
  }

  void top_axis(const Pane& pane) {
    const AdjacentSeries& series = *fig_.spec.top_panel;
    if (series.plot_type == PlotType::dendrogram) return;
    const Pane* plot = layout_.find(PaneRole::top_plot);
    const DepthMap depth{plot->rect, true, series_scale(series, fig_.spec.col_membership)};
    const bool left = fig_.spec.top_axis_side == AxisSide::left;
    const double size = fig_.spec.axis_text_size;
    const double x = left ? pane.rect.right() : pane.rect.x;
    const double dir = left ? -1.0 : 1.0;
    svg_.open("g", {A::str("id", "top_axis")});
    svg_.element("line", {A::str("class", "axis"), A::num("x1", x), A::num("y1", pane.rect.y), A::num("x2", x),
                          A::num("y2", pane.rect.bottom()), A::str("stroke", "#000000"), A::num("stroke-width", 1)});
    const auto& sc = depth.scale;
    for (double v : {sc.lo + 0.05 / 1.1 * (sc.hi - sc.lo), (sc.lo + sc.hi) / 2.0, sc.hi - 0.05 / 1.1 * (sc.hi - sc.lo)}) {
      const double y = depth(v);
      svg_.element("line", {A::str("class", "tick"), A::num("x1", x), A::num("y1", y), A::num("x2", x + dir * 4.0),
                            A::num("y2", y), A::str("stroke", "#000000"), A::num("stroke-width", 1)});
      svg_.text({A::str("class", "tick-label"), A::num("x", x + dir * 6.0), A::num("y", y), A::num("font-size", size),
                 A::str("text-anchor", left ? "end" : "start"), A::str("dominant-baseline", "central")},
                format_tick(v));
    }
    if (!series.axis_name.empty()) {
      const double nx = left ? pane.rect.x + size : pane.rect.right() - size;
      const double ny = pane.rect.y + pane.rect.h / 2.0;
      svg_.text({A::str("class", "axis-name"), A::num("x", nx), A::num("y", ny), A::num("font-size", size),
                 A::str("text-anchor", "middle"), A::str("dominant-baseline", "central"),
                 A::str("transform", "rotate(-90 " + svg_number(nx) + " " + svg_number(ny) + ")")},
                series.axis_name);
    }
    svg_.close("g");
  }

  void right_axis(const Pane& pane) {
    const AdjacentSeries& series = *fig_.spec.right_panel;
    if (series.plot_type == PlotType::dendrogram) return;
    const Pane* plot = layout_.find(PaneRole::right_plot);
    const DepthMap depth{plot->rect, false, series_scale(series, fig_.spec.row_membership)};
    const double size = fig_.spec.axis_text_size;
    const double y = pane.rect.y;
    svg_.open("g", {A::str("id", "right_axis")});
    svg_.element("line", {A::str("class", "axis"), A::num("x1", pane.rect.x), A::num("y1", y), A::num("x2", pane.rect.right()),
                          A::num("y2", y), A::str("stroke", "#000000"), A::num("stroke-width", 1)});
    const auto& sc = depth.scale;
    for (double v : {sc.lo + 0.05 / 1.1 * (sc.hi - sc.lo), (sc.lo + sc.hi) / 2.0, sc.hi - 0.05 / 1.1 * (sc.hi - sc.lo)}) {
      const double x = depth(v);
      svg_.element("line", {A::str("class", "tick"), A::num("x1", x), A::num("y1", y), A::num("x2", x), A::num("y2", y + 4.0),
                            A::str("stroke", "#000000"), A::num("stroke-width", 1)});
      svg_.text({A::str("class", "tick-label"), A::num("x", x), A::num("y", y + 6.0 + size / 2.0), A::num("font-size", size),
                 A::str("text-anchor", "middle"), A::str("dominant-baseline", "central")},
                format_tick(v));
    }
    if (!series.axis_name.empty()) {
      svg_.text({A::str("class", "axis-name"), A::num("x", pane.rect.x + pane.rect.w / 2.0),
                 A::num("y", pane.rect.bottom() - size / 2.0 - fig_.spec.label_padding), A::num("font-size", size),
                 A::str("text-anchor", "middle"), A::str("dominant-baseline", "central")},
                series.axis_name);
    }
    svg_.close("g");
  }

  void labels(const Pane& pane, Axis axis) {
    const bool left = axis == Axis::row;
    const LabelStyle& style = left ? fig_.spec.left_label : fig_.spec.bottom_label;
    const auto texts = axis_labels(fig_, axis);
    const auto& mem = left ? fig_.spec.row_membership : fig_.spec.col_membership;
    const bool clustered = mem && texts.size() == mem->k() &&
                           (style.mode == LabelMode::cluster || style.mode == LabelMode::automatic);
    const auto& slots = left ? (clustered ? pane.y_clusters : pane.y_intervals) : (clustered ? pane.x_clusters : pane.x_intervals);
    const double pad = fig_.spec.label_padding;
    const double rad = style.text_angle * 3.14159265358979323846 / 180.0;
    // Reading direction in SVG coordinates (y grows downward).
    const double ux = std::fabs(style.text_angle) == 90.0 || style.text_angle == 270.0 ? 0.0 : std::cos(rad);
    const double uy = style.text_angle == 0.0 || style.text_angle == 180.0 ? 0.0 : -std::sin(rad);
    const double du = left ? ux : uy;

    svg_.open("g", {A::str("id", left ? "left_label" : "bottom_label")});
    for (std::size_t i = 0; i < texts.size(); ++i) {
      const Interval& slot = slots[i];
      if (!style.background_colors.empty()) {
        const Rgba bg = resolve_color(style.background_colors, i, "#FFFFFF");
        const Rect r = left ? Rect{pane.rect.x, slot.lo, pane.rect.w, slot.size()} : Rect{slot.lo, pane.rect.y, slot.size(), pane.rect.h};
        svg_.element("rect", {A::str("class", "label-bg"), A::num("x", r.x), A::num("y", r.y), A::num("width", r.w),
                              A::num("height", r.h), A::str("fill", to_hex(bg.rgb)),
                              A::num("fill-opacity", bg.alpha * style.background_alpha)});
      }
      const double depth_lo = left ? pane.rect.x : pane.rect.y;
      const double depth_hi = left ? pane.rect.right() : pane.rect.bottom();
      double depth_pos = (depth_lo + depth_hi) / 2.0;
      double along = slot.mid();
      std::string anchor = "middle";
      if (std::fabs(du) > 1e-9) {
        const double end_edge = du > 0 ? depth_hi - pad : depth_lo + pad;
        const double start_edge = du > 0 ? depth_lo + pad : depth_hi - pad;
        if (style.alignment == TextAlign::right) {
          depth_pos = end_edge;
          anchor = "end";
        } else if (style.alignment == TextAlign::left) {
          depth_pos = start_edge;
          anchor = "start";
        }
      } else if (style.alignment != TextAlign::center) {
        const bool forward = (left ? uy : ux) > 0;
        const bool at_hi = (style.alignment == TextAlign::right) == forward;
        along = at_hi ? slot.hi : slot.lo;
        anchor = style.alignment == TextAlign::right ? "end" : "start";
      }
      const double x = left ? depth_pos : along;
      const double y = left ? along : depth_pos;
      if (style.text_angle == 0.0) {
        svg_.text({A::str("class", "label"), A::num("x", x), A::num("y", y), A::num("font-size", style.text_size),
                   A::str("fill", style.text_color), A::str("text-anchor", anchor), A::str("dominant-baseline", "central")},
                  texts[i]);
      } else {
        svg_.text({A::str("class", "label"), A::num("x", x), A::num("y", y), A::num("font-size", style.text_size),
                   A::str("fill", style.text_color), A::str("text-anchor", anchor), A::str("dominant-baseline", "central"),
                   A::str("transform", "rotate(" + svg_number(-style.text_angle) + " " + svg_number(x) + " " + svg_number(y) + ")")},
                  texts[i]);
      }
    }
    svg_.close("g");
  }

  void title(const Pane& pane, const std::string& text, bool rotated) {
    const double x = pane.rect.x + pane.rect.w / 2.0;
    const double y = pane.rect.y + pane.rect.h / 2.0;
    svg_.open("g", {A::str("id", rotated ? "row_title" : "col_title")});
    if (rotated) {
      svg_.text({A::str("class", "title"), A::num("x", x), A::num("y", y), A::num("font-size", fig_.spec.title_size),
                 A::str("text-anchor", "middle"), A::str("dominant-baseline", "central"),
                 A::str("transform", "rotate(-90 " + svg_number(x) + " " + svg_number(y) + ")")},
                text);
    } else {
      svg_.text({A::str("class", "title"), A::num("x", x), A::num("y", y), A::num("font-size", fig_.spec.title_size),
                 A::str("text-anchor", "middle"), A::str("dominant-baseline", "central")},
                text);
    }
    svg_.close("g");
  }

  void legend(const Pane& pane, const ColorScale& scale) {
    constexpr std::size_t swatches = 50;
    const double size = fig_.spec.axis_text_size;
    const Rect& r = pane.rect;
    const double bar_w = 0.6 * r.w;
    const double bar_h = std::min(0.35 * r.h, 12.0);
    const double x0 = r.x + (r.w - bar_w) / 2.0;
    const double y0 = r.y + fig_.spec.label_padding;
    const double lo = scale.domain_min();
    const double hi = scale.domain_max();
    const bool flat = lo == hi;
    const std::size_t count = flat ? 1 : swatches;
    const auto slots = axis_map(x0, bar_w, count);
    svg_.open("g", {A::str("id", "legend")});
    for (std::size_t i = 0; i < count; ++i) {
      const double v = flat ? lo : lo + (hi - lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
      svg_.element("rect", {A::str("class", "legend-swatch"), A::num("x", slots[i].lo), A::num("y", y0),
                            A::num("width", slots[i].size()), A::num("height", bar_h),
                            A::str("fill", to_hex(map_color(v, scale)))});
    }
    const double ty = y0 + bar_h + 2.0 + size / 2.0;
    svg_.text({A::str("class", "legend-label"), A::num("x", x0), A::num("y", ty), A::num("font-size", size),
               A::str("text-anchor", "start"), A::str("dominant-baseline", "central")},
              format_tick(lo));
    svg_.text({A::str("class", "legend-label"), A::num("x", x0 + bar_w), A::num("y", ty), A::num("font-size", size),
               A::str("text-anchor", "end"), A::str("dominant-baseline", "central")},
              format_tick(hi));
    const bool has_na = fig_.smoothed ? std::any_of(fig_.smoothed->block_values.begin(), fig_.smoothed->block_values.end(),
                                                    [](const auto& v) { return !v.has_value(); })
                                      : fig_.matrix.has_missing();
    if (has_na) {
      const double nx = x0 + bar_w + 2.0 * size;
      svg_.element("rect", {A::str("class", "legend-swatch"), A::num("x", nx), A::num("y", y0), A::num("width", bar_h),
                            A::num("height", bar_h), A::str("fill", to_hex(scale.na_color())), A::str("stroke", "#000000")});
      svg_.text({A::str("class", "legend-label"), A::num("x", nx + bar_h / 2.0), A::num("y", ty), A::num("font-size", size),
                 A::str("text-anchor", "middle"), A::str("dominant-baseline", "central")},
                "NA");
    }
    svg_.close("g");
  }

  const PanelLayout& layout_;
  const PreparedFigure& fig_;
  SvgWriter svg_;
};

}  // namespace

std::string render_scene(const PanelLayout& layout, const PreparedFigure& fig) { return SceneRenderer(layout, fig).run(); }

std::string render_svg(const FigureSpec& spec, const LabeledMatrix& m) {
  const PreparedFigure fig = prepare_figure(spec, m);
  return render_scene(compute_layout(fig), fig);
}

std::string render_line_chart(const LineChartSeries& series, std::string_view x_label, std::string_view title,
                              double width, double height) {
  if (series.x.size() != series.y.size() || series.x.empty()) throw Error("line chart needs matching, non-empty x and y");
  const double ml = 60.0, mr = 20.0, mt = 30.0, mb = 45.0;
  const Rect plot{ml, mt, width - ml - mr, height - mt - mb};
  const auto [xmin_it, xmax_it] = std::minmax_element(series.x.begin(), series.x.end());
  const auto [ymin_it, ymax_it] = std::minmax_element(series.y.begin(), series.y.end());
  double x0 = *xmin_it, x1 = *xmax_it, y0 = *ymin_it, y1 = *ymax_it;
  if (x0 == x1) {
    x0 -= 0.5;
    x1 += 0.5;
  }
  if (y0 == y1) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double ypad = 0.05 * (y1 - y0);
  y0 -= ypad;
  y1 += ypad;
  auto px = [&](double v) { return plot.x + (v - x0) / (x1 - x0) * plot.w; };
  auto py = [&](double v) { return plot.bottom() - (v - y0) / (y1 - y0) * plot.h; };

  SvgWriter svg(width, height);
  svg.element("rect", {A::str("class", "background"), A::num("x", 0), A::num("y", 0), A::num("width", width),
                       A::num("height", height), A::str("fill", "#FFFFFF")});
  svg.text({A::str("class", "title"), A::num("x", width / 2.0), A::num("y", mt / 2.0), A::num("font-size", 12),
            A::str("text-anchor", "middle"), A::str("dominant-baseline", "central")},
           title);
  svg.element("line", {A::str("class", "axis"), A::num("x1", plot.x), A::num("y1", plot.bottom()), A::num("x2", plot.right()),
                       A::num("y2", plot.bottom()), A::str("stroke", "#000000"), A::num("stroke-width", 1)});
  svg.element("line", {A::str("class", "axis"), A::num("x1", plot.x), A::num("y1", plot.y), A::num("x2", plot.x),
                       A::num("y2", plot.bottom()), A::str("stroke", "#000000"), A::num("stroke-width", 1)});
  for (double v : series.x) {
    svg.element("line", {A::str("class", "tick"), A::num("x1", px(v)), A::num("y1", plot.bottom()), A::num("x2", px(v)),
                         A::num("y2", plot.bottom() + 4.0), A::str("stroke", "#000000"), A::num("stroke-width", 1)});
    svg.text({A::str("class", "tick-label"), A::num("x", px(v)), A::num("y", plot.bottom() + 14.0), A::num("font-size", 9),
              A::str("text-anchor", "middle"), A::str("dominant-baseline", "central")},
             format_tick(v));
  }
  for (double v : {*ymin_it, *ymax_it}) {
    svg.element("line", {A::str("class", "tick"), A::num("x1", plot.x - 4.0), A::num("y1", py(v)), A::num("x2", plot.x),
                         A::num("y2", py(v)), A::str("stroke", "#000000"), A::num("stroke-width", 1)});
    svg.text({A::str("class", "tick-label"), A::num("x", plot.x - 6.0), A::num("y", py(v)), A::num("font-size", 9),
              A::str("text-anchor", "end"), A::str("dominant-baseline", "central")},
             format_tick(v));
  }
  svg.text({A::str("class", "axis-name"), A::num("x", plot.x + plot.w / 2.0), A::num("y", height - 10.0), A::num("font-size", 10),
            A::str("text-anchor", "middle"), A::str("dominant-baseline", "central")},
           x_label);
  const double ny = plot.y + plot.h / 2.0;
  svg.text({A::str("class", "axis-name"), A::num("x", 14.0), A::num("y", ny), A::num("font-size", 10),
            A::str("text-anchor", "middle"), A::str("dominant-baseline", "central"),
            A::str("transform", "rotate(-90 " + svg_number(14.0) + " " + svg_number(ny) + ")")},
           series.name);
  std::string points;
  for (std::size_t i = 0; i < series.x.size(); ++i) {
    if (!points.empty()) points += ' ';
    points += svg_number(px(series.x[i])) + "," + svg_number(py(series.y[i]));
  }
  svg.element("polyline", {A::str("class", "line"), A::str("points", points), A::str("fill", "none"), A::str("stroke", "#000000"),
                           A::num("stroke-width", 1.5)});
  for (std::size_t i = 0; i < series.x.size(); ++i)
    svg.element("circle", {A::str("class", "point"), A::num("cx", px(series.x[i])), A::num("cy", py(series.y[i])), A::num("r", 3),
                           A::str("fill", "#000000"), A::num("fill-opacity", 1)});
  return svg.finish();
}

}  // namespace supergrid
