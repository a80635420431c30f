#include <doctest.h>

#include <cmath>

#include "figure_gen.hpp"
#include "helpers.hpp"
#include "supergrid/error.hpp"
#include "supergrid/render.hpp"
#include "xml_check.hpp"

using namespace supergrid;
using testing::elements_with_class;
using testing::parse_xml;

namespace {

std::size_t expected_cells(const FigureSpec& s, const LabeledMatrix& m) {
  if (!s.smooth_heat) return m.rows() * m.cols();
  const std::size_t kr = s.row_membership ? s.row_membership->k() : m.rows();
  const std::size_t kc = s.col_membership ? s.col_membership->k() : m.cols();
  return kr * kc;
}

}  // namespace

TEST_CASE("svg numbers and escaping") {
  CHECK(svg_number(1.0) == "1.0000");
  CHECK(svg_number(2.34567) == "2.3457");
  CHECK(svg_number(-0.00001) == "0.0000");
  CHECK(svg_number(-12.5) == "-12.5000");
  CHECK(xml_escape("a<b & \"c\" 'd'>") == "a&lt;b &amp; &quot;c&quot; &apos;d&apos;&gt;");
}

TEST_CASE("quantiles and boxplot statistics") {
  const std::vector<double> v{1, 2, 3, 4};
  CHECK(quantile_sorted(v, 0.25) == doctest::Approx(1.75));
  CHECK(quantile_sorted(v, 0.5) == doctest::Approx(2.5));
  CHECK(quantile_sorted(v, 1.0) == 4.0);
  const auto b = boxplot_stats({1, 2, 3, 4, 5, 6, 7, 8, 100});
  CHECK(b.q1 == 3.0);
  CHECK(b.median == 5.0);
  CHECK(b.q3 == 7.0);
  CHECK(b.whisker_low == 1.0);
  CHECK(b.whisker_high == 8.0);
  CHECK(b.outliers == std::vector<double>{100.0});
}

TEST_CASE("local linear smoother reproduces a straight line") {
  std::vector<double> x, y;
  for (int i = 0; i < 12; ++i) {
    x.push_back(i * 0.5);
    y.push_back(3.0 - 2.0 * i * 0.5);
  }
  const auto fit = loess_smooth(x, y, 0.5);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(fit[i] == doctest::Approx(y[i]).epsilon(1e-9));
  CHECK_THROWS_AS(loess_smooth(x, std::vector<double>{1.0}, 0.5), Error);
}

TEST_CASE("xml checker rejects malformed documents") {
  CHECK_NOTHROW(parse_xml("<a x=\"1\"><b/>t&amp;t</a>"));
  CHECK_THROWS(parse_xml("<a><b></a>"));
  CHECK_THROWS(parse_xml("<a x=1/>"));
  CHECK_THROWS(parse_xml("<a>&nbsp;</a>"));
  CHECK_THROWS(parse_xml("<a/><b/>"));
  CHECK_THROWS(parse_xml("<a x=\"1\" x=\"2\"/>"));
}

TEST_CASE("raw heatmap has one rect per cell and NA cells use the NA color") {
  const LabeledMatrix m(2, 3, {1, 2, std::nullopt, 4, 5, 6}, {"r<1>", "r&2"}, {"a", "b", "c"});
  FigureSpec s;
  s.na_color = Rgb{0x12, 0x34, 0x56};
  const auto svg = render_svg(s, m);
  const auto root = parse_xml(svg);
  CHECK(root.name == "svg");
  CHECK(root.attrs.at("xmlns") == "http://www.w3.org/2000/svg");
  const auto cells = elements_with_class(root, "rect", "cell");
  REQUIRE(cells.size() == 6);
  CHECK(cells[2]->attrs.at("fill") == "#123456");
  CHECK(cells[0]->attrs.at("fill") == "#440154");  // minimum -> first palette color
  CHECK(cells[5]->attrs.at("fill") == "#FDE725");
  std::size_t na_cells = 0;
  for (const auto* c : cells) na_cells += c->attrs.at("fill") == "#123456";
  CHECK(na_cells == 1);
  // Legend: 50 swatches plus the NA swatch.
  CHECK(elements_with_class(root, "rect", "legend-swatch").size() == 51);
  bool escaped = false;
  for (const auto* t : elements_with_class(root, "text", "label")) escaped |= t->text == "r<1>";
  CHECK(escaped);
}

TEST_CASE("smoothed heatmap has one rect per cluster block") {
  std::vector<double> v(6 * 5);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i % 7);
  const auto m = LabeledMatrix::dense(6, 5, v);
  FigureSpec s;
  s.smooth_heat = true;
  s.row_membership = Membership({0, 1, 2, 0, 1, 2}, 3);
  s.col_membership = Membership({0, 0, 1, 1, 1}, 2);
  const auto root = parse_xml(render_svg(s, m));
  CHECK(elements_with_class(root, "rect", "cell").size() == 6);
  s.col_membership.reset();
  CHECK(elements_with_class(parse_xml(render_svg(s, m)), "rect", "cell").size() == 15);
}

TEST_CASE("all-missing smoothed block renders in the NA color") {
  const LabeledMatrix m(2, 2, {std::nullopt, 1, std::nullopt, 2}, {}, {});
  FigureSpec s;
  s.smooth_heat = true;
  s.na_color = Rgb{1, 2, 3};
  s.col_membership = Membership::singletons(2);
  s.row_membership = Membership::single_cluster(2);
  const auto cells = elements_with_class(parse_xml(render_svg(s, m)), "rect", "cell");
  REQUIRE(cells.size() == 2);
  CHECK(cells[0]->attrs.at("fill") == "#010203");
  CHECK(cells[1]->attrs.at("fill") != "#010203");
}

TEST_CASE("panels, dendrograms and grid produce their elements") {
  const auto m = LabeledMatrix::dense(4, 4, {1, 2, 3, 4, 2, 3, 4, 5, 9, 8, 7, 6, 1, 1, 1, 1});
  FigureSpec s;
  s.col_dendrogram = hcluster(euclidean_distance_matrix(m.transposed()));
  s.row_membership = Membership({0, 0, 1, 1}, 2);
  AdjacentSeries right;
  right.side = PanelSide::right;
  right.plot_type = PlotType::boxplot;
  right.values = {1.0, 2.0, 3.0, std::nullopt};
  s.right_panel = right;
  AdjacentSeries top;
  top.plot_type = PlotType::bar;
  top.values = {1.0, -2.0, 3.0, 4.0};
  s.top_panel = top;
  s.grid_hline_color = "white";
  const auto root = parse_xml(render_svg(s, m));
  CHECK(elements_with_class(root, "rect", "bar").size() == 4);
  CHECK(elements_with_class(root, "rect", "box").size() == 2);
  CHECK(elements_with_class(root, "line", "median").size() == 2);
  CHECK(elements_with_class(root, "line", "dendrogram").size() == 9);
  CHECK(elements_with_class(root, "line", "grid").size() == 1);
}

TEST_CASE("degenerate color domain gives a single legend swatch") {
  const auto m = LabeledMatrix::dense(2, 2, {3, 3, 3, 3});
  const auto root = parse_xml(render_svg(FigureSpec{}, m));
  CHECK(elements_with_class(root, "rect", "legend-swatch").size() == 1);
}

TEST_CASE("random figures render to well-formed SVG with the right cell count") {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = testing::random_figure(rng);
    const auto svg = render_svg(f.spec, f.matrix);
    INFO("trial " << trial);
    testing::XmlElement root;
    REQUIRE_NOTHROW(root = parse_xml(svg));
    CHECK(elements_with_class(root, "rect", "cell").size() == expected_cells(f.spec, f.matrix));
    CHECK(render_svg(f.spec, f.matrix) == svg);
  }
}

TEST_CASE("invalid figures fail before any output") {
  const auto m = LabeledMatrix::dense(1, 2, {1, 2});
  FigureSpec s;
  s.palette = {Rgb{0, 0, 0}};
  CHECK_THROWS_AS(render_svg(s, m), Error);
}

TEST_CASE("line chart") {
  const auto svg = render_line_chart({"jaccard", {2, 3, 4}, {0.5, 1.0, 0.75}}, "k", "stability");
  const auto root = parse_xml(svg);
  CHECK(elements_with_class(root, "circle", "point").size() == 3);
  CHECK(elements_with_class(root, "polyline", "line").size() == 1);
}
