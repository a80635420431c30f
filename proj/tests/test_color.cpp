#include <doctest.h>

#include "supergrid/color.hpp"
#include "supergrid/error.hpp"

using namespace supergrid;

TEST_CASE("color parsing") {
  CHECK(parse_color("#FF8000")->rgb == Rgb{255, 128, 0});
  CHECK(parse_color("#f80")->rgb == Rgb{255, 136, 0});
  CHECK(parse_color("#00000080")->alpha == doctest::Approx(128.0 / 255.0));
  CHECK(parse_color("White")->rgb == Rgb{255, 255, 255});
  CHECK(parse_color("grey35")->rgb == Rgb{89, 89, 89});
  CHECK(parse_color("gray100")->rgb == Rgb{255, 255, 255});
  CHECK(parse_color("slategray4")->rgb == Rgb{108, 123, 139});
  CHECK_FALSE(parse_color("grey101").has_value());
  CHECK_FALSE(parse_color("#12345").has_value());
  CHECK_FALSE(parse_color("chartreuse-ish").has_value());
  CHECK(to_hex(Rgb{1, 171, 255}) == "#01ABFF");
}

TEST_CASE("viridis table endpoints and midpoint") {
  const auto& v = viridis_table();
  CHECK(to_hex(v.front()) == "#440154");
  CHECK(to_hex(v[128]) == "#21918C");
  CHECK(to_hex(v.back()) == "#FDE725");
}

TEST_CASE("linear map over the domain") {
  const ColorScale s({{0, 0, 0}, {255, 255, 255}}, {255, 0, 0}, 0.0, 10.0);
  CHECK(map_color(0.0, s) == Rgb{0, 0, 0});
  CHECK(map_color(10.0, s) == Rgb{255, 255, 255});
  CHECK(map_color(5.0, s) == Rgb{128, 128, 128});  // 127.5 rounds half up
  CHECK(map_color(-3.0, s) == Rgb{0, 0, 0});       // clamped
  CHECK(map_color(std::nullopt, s) == Rgb{255, 0, 0});
}

TEST_CASE("degenerate domain maps to the palette midpoint") {
  const ColorScale s({{0, 0, 0}, {200, 100, 50}}, {255, 255, 255}, 4.0, 4.0);
  CHECK(map_color(4.0, s) == Rgb{100, 50, 25});
}

TEST_CASE("explicit breaks place each anchor") {
  const ColorScale s({{0, 0, 0}, {100, 100, 100}, {200, 200, 200}}, {0.0, 1.0, 10.0}, {255, 255, 255});
  CHECK(map_color(1.0, s) == Rgb{100, 100, 100});
  CHECK(map_color(5.5, s) == Rgb{150, 150, 150});
  CHECK(s.anchor_value(2) == 10.0);
  CHECK_THROWS_AS(ColorScale({{0, 0, 0}, {1, 1, 1}}, std::vector<double>{1.0, 1.0}, Rgb{}), Error);
  CHECK_THROWS_AS(ColorScale({{0, 0, 0}, {1, 1, 1}}, std::vector<double>{1.0}, Rgb{}), Error);
}

TEST_CASE("even anchors without breaks") {
  const ColorScale s({{0, 0, 0}, {10, 10, 10}, {20, 20, 20}, {30, 30, 30}, {40, 40, 40}}, {0, 0, 0}, -2.0, 2.0);
  CHECK(s.anchor_value(1) == -1.0);
  CHECK(map_color(-1.0, s) == Rgb{10, 10, 10});
  CHECK(map_color(0.5, s) == Rgb{25, 25, 25});
}

TEST_CASE("named palettes") {
  CHECK(named_palette("viridis")->size() == 256);
  CHECK(to_hex(named_palette("BuPu")->front()) == "#EDF8FB");
  CHECK(to_hex(named_palette("RdBu")->back()) == "#0571B0");
  CHECK_FALSE(named_palette("jet").has_value());
}
