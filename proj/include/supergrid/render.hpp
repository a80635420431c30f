#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "supergrid/color.hpp"
#include "supergrid/layout.hpp"

namespace supergrid {

struct BoxplotStats {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  std::vector<double> outliers;
};

/// Quantile at probability p with linear interpolation between order
/// statistics at zero-based position p * (n - 1). `sorted` must be ascending.
double quantile_sorted(std::span<const double> sorted, double p);

/// Quartiles as above; whiskers reach the most extreme data points within
/// 1.5 IQR of the quartiles; everything beyond is an outlier.
BoxplotStats boxplot_stats(std::vector<double> values);

/// Local linear regression with tricube weights over the nearest
/// ceil(span * n) points, evaluated at each x. Inputs must have equal length.
std::vector<double> loess_smooth(std::span<const double> x, std::span<const double> y, double span = 0.75);

/// Fixed 4-decimal formatting used for every numeric SVG attribute.
std::string svg_number(double v);
std::string xml_escape(std::string_view text);

/// Minimal SVG 1.1 writer. Attributes are emitted in the order given.
class SvgWriter {
 public:
  using Attr = std::pair<std::string_view, std::string>;

  SvgWriter(double width, double height);

  void open(std::string_view tag, std::initializer_list<Attr> attrs);
  void close(std::string_view tag);
  void element(std::string_view tag, std::initializer_list<Attr> attrs);
  void text(std::initializer_list<Attr> attrs, std::string_view content);
  std::string finish();

  static Attr num(std::string_view key, double v) { return {key, svg_number(v)}; }
  static Attr str(std::string_view key, std::string v) { return {key, std::move(v)}; }

 private:
  void write_attrs(std::initializer_list<Attr> attrs);
  std::string out_;
  int depth_ = 1;
};

/// Renders a prepared figure into a standalone SVG document. All validation
/// happens before any output is produced.
std::string render_scene(const PanelLayout& layout, const PreparedFigure& fig);

/// prepare_figure -> compute_layout -> render_scene.
std::string render_svg(const FigureSpec& spec, const LabeledMatrix& m);

struct LineChartSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Simple standalone line chart (used for the diagnostic curves).
std::string render_line_chart(const LineChartSeries& series, std::string_view x_label, std::string_view title,
                              double width = 480.0, double height = 320.0);

}  // namespace supergrid
