#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "supergrid/error.hpp"
#include "supergrid/matrix.hpp"

using namespace supergrid;
using testing::contains;
using testing::error_message;

TEST_CASE("csv with header, row names and NA tokens") {
  const auto m = parse_matrix_csv(",a,b,c\nx,1,NA,3\ny,4,5,\n");
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m.row_names() == std::vector<std::string>{"x", "y"});
  CHECK(m.col_names() == std::vector<std::string>{"a", "b", "c"});
  CHECK(m.at(0, 0) == 1.0);
  CHECK_FALSE(m.at(0, 1).has_value());
  CHECK_FALSE(m.at(1, 2).has_value());
  CHECK(m.missing_count() == 2);
  CHECK(std::isnan(m.raw()[1]));
}

TEST_CASE("csv without header or row names gets generated names") {
  CsvOptions o;
  o.header = false;
  o.row_names = false;
  const auto m = parse_matrix_csv("1,2\n3,4\n", o);
  CHECK(m.row_names() == std::vector<std::string>{"r1", "r2"});
  CHECK(m.col_names() == std::vector<std::string>{"c1", "c2"});
  CHECK(m.at(1, 1) == 4.0);
}

TEST_CASE("quoted fields, CRLF, BOM and blank lines") {
  const auto m = parse_matrix_csv("\xEF\xBB\xBF\"\",\"a,1\",\"b \"\"q\"\"\"\r\n\r\n\"r,1\",1.5,-2e3\r\n");
  CHECK(m.col_names() == std::vector<std::string>{"a,1", "b \"q\""});
  CHECK(m.row_names() == std::vector<std::string>{"r,1"});
  CHECK(m.at(0, 1) == -2000.0);
}

TEST_CASE("custom NA tokens") {
  CsvOptions o;
  o.na_tokens = {"-"};
  const auto m = parse_matrix_csv(",a,b\nx,-,2\n", o);
  CHECK_FALSE(m.at(0, 0).has_value());
  CHECK(contains(error_message([&] { parse_matrix_csv(",a,b\nx,NA,2\n", o); }), "cannot parse 'NA'"));
}

TEST_CASE("ragged rows report the physical line") {
  const auto msg = error_message([] { parse_matrix_csv(",a,b\nx,1,2\n\ny,3\n"); });
  CHECK(msg == "row 4: expected 3 fields, got 2");
}

TEST_CASE("unparseable cells name row and column") {
  const auto msg = error_message([] { parse_matrix_csv(",a,b\nx,1,abc\n"); });
  CHECK(contains(msg, "row 2, column 3"));
  CHECK(contains(msg, "'abc'"));
  CHECK(contains(error_message([] { parse_matrix_csv(",a\nx,inf\n"); }), "finite"));
}

TEST_CASE("duplicate names produce warnings, not errors") {
  std::vector<std::string> warnings;
  const auto m = parse_matrix_csv(",a,a\nx,1,2\nx,3,4\n", {}, &warnings);
  CHECK(m.rows() == 2);
  CHECK(warnings.size() == 2);
}

TEST_CASE("csv round trip preserves values and missing cells") {
  const LabeledMatrix m(2, 2, {0.1, std::nullopt, -3.25, 1e-300}, {"p", "q"}, {"u", "v"});
  const std::string text = matrix_to_csv(m);
  CHECK(text == "\"\",u,v\np,0.1,NA\nq,-3.25,1e-300\n");
  CHECK(parse_matrix_csv(text) == m);
}

TEST_CASE("missing file error names the path") {
  const auto msg = error_message([] { load_matrix("/nonexistent/m.csv"); });
  CHECK(contains(msg, "/nonexistent/m.csv"));
}

TEST_CASE("orderings validate permutations") {
  CHECK_THROWS_AS(Ordering(Axis::row, {0, 0, 1}), Error);
  CHECK_THROWS_AS(Ordering(Axis::row, {0, 3, 1}), Error);
  const Ordering o(Axis::row, {2, 0, 1});
  CHECK(o.inverse().permutation() == std::vector<std::size_t>{1, 2, 0});
  CHECK(o.then(o.inverse()) == Ordering::identity(Axis::row, 3));
}

TEST_CASE("ordering by row and column means") {
  const LabeledMatrix m(3, 2, {5.0, 5.0, 1.0, std::nullopt, 3.0, 4.0}, {"a", "b", "c"}, {"x", "y"});
  CHECK(order_by_row_mean(m, SortDirection::ascending).permutation() == std::vector<std::size_t>{1, 2, 0});
  CHECK(order_by_row_mean(m, SortDirection::descending).permutation() == std::vector<std::size_t>{0, 2, 1});
  CHECK(order_by_col_mean(m, SortDirection::ascending).permutation() == std::vector<std::size_t>{0, 1});
  const LabeledMatrix empty_row(2, 1, {std::nullopt, 1.0}, {"a", "b"}, {"x"});
  CHECK(contains(error_message([&] { order_by_row_mean(empty_row, SortDirection::ascending); }), "row 1"));
}

TEST_CASE("stable value ordering keeps ties in input order") {
  const std::vector<double> keys{2.0, 1.0, 2.0, 1.0};
  CHECK(order_by_values(Axis::column, keys, SortDirection::ascending).permutation() ==
        std::vector<std::size_t>{1, 3, 0, 2});
  CHECK(order_by_values(Axis::column, keys, SortDirection::descending).permutation() ==
        std::vector<std::size_t>{0, 2, 1, 3});
}

TEST_CASE("apply_ordering moves names with values") {
  const LabeledMatrix m(2, 2, {1.0, 2.0, 3.0, 4.0}, {"a", "b"}, {"x", "y"});
  const auto r = apply_ordering(m, Ordering(Axis::row, {1, 0}), Ordering(Axis::column, {1, 0}));
  CHECK(r.row_names() == std::vector<std::string>{"b", "a"});
  CHECK(r.col_names() == std::vector<std::string>{"y", "x"});
  CHECK(r.at(0, 0) == 4.0);
  CHECK(r.at(1, 1) == 1.0);
  CHECK_THROWS_AS(apply_ordering(m, Ordering(Axis::row, {0, 1, 2}), std::nullopt), Error);
}

TEST_CASE("transpose") {
  const LabeledMatrix m(2, 3, {1.0, 2.0, 3.0, 4.0, 5.0, std::nullopt}, {"a", "b"}, {"x", "y", "z"});
  const auto t = m.transposed();
  CHECK(t.rows() == 3);
  CHECK(t.at(2, 0) == 3.0);
  CHECK_FALSE(t.at(2, 1).has_value());
  CHECK(t.transposed() == m);
}

TEST_CASE("series csv with header skip and NA") {
  const auto s = parse_series_csv("name,value\na,1\nb,NA\nc,2.5\n");
  REQUIRE(s.size() == 3);
  CHECK(s[0] == 1.0);
  CHECK_FALSE(s[1].has_value());
  CHECK(s[2] == 2.5);
  CHECK(contains(error_message([] { parse_series_csv("a,1,2\n"); }), "expected 2 fields"));
}

TEST_CASE("adjacent series reorder permutes per-value colors") {
  AdjacentSeries s;
  s.values = {1.0, 2.0, 3.0};
  s.bar_colors = {"red", "green", "blue"};
  s.point_colors = {"black"};
  const auto r = s.reordered(Ordering(Axis::column, {2, 0, 1}));
  CHECK(r.values == std::vector<std::optional<double>>{3.0, 1.0, 2.0});
  CHECK(r.bar_colors == std::vector<std::string>{"blue", "red", "green"});
  CHECK(r.point_colors == std::vector<std::string>{"black"});
}

TEST_CASE("plot type names round trip") {
  for (auto t : {PlotType::scatter, PlotType::scatterline, PlotType::scattersmooth, PlotType::smooth, PlotType::bar,
                 PlotType::line, PlotType::boxplot, PlotType::dendrogram})
    CHECK(parse_plot_type(to_string(t)) == t);
  CHECK_FALSE(parse_plot_type("pie").has_value());
}
