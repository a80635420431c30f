#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace supergrid {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct Rgba {
  Rgb rgb;
  double alpha = 1.0;
};

/// "#RRGGBB", uppercase.
std::string to_hex(Rgb c);

/// Accepts "#RGB", "#RRGGBB", "#RRGGBBAA" and a small table of named colors
/// (white, black, greyN/grayN, slategray4, ...).
std::optional<Rgba> parse_color(std::string_view text);

const std::array<Rgb, 256>& viridis_table();

/// Named palettes: "viridis" (256 anchors), "BuPu" and "RdBu" (5-class).
std::optional<std::vector<Rgb>> named_palette(std::string_view name);

class ColorScale {
 public:
  /// Anchors spread evenly over [min, max].
  ColorScale(std::vector<Rgb> palette, Rgb na_color, double min, double max);
  /// Anchors at explicit ascending break values, one per palette color.
  ColorScale(std::vector<Rgb> palette, std::vector<double> breaks, Rgb na_color);

  static ColorScale viridis(double min, double max, Rgb na_color = Rgb{255, 255, 255});

  const std::vector<Rgb>& palette() const noexcept { return palette_; }
  const std::optional<std::vector<double>>& breaks() const noexcept { return breaks_; }
  Rgb na_color() const noexcept { return na_; }
  double domain_min() const noexcept { return min_; }
  double domain_max() const noexcept { return max_; }

  /// Value of palette anchor i.
  double anchor_value(std::size_t i) const;

 private:
  std::vector<Rgb> palette_;
  std::optional<std::vector<double>> breaks_;
  Rgb na_;
  double min_;
  double max_;
};

/// Missing -> na color. Otherwise linear interpolation in sRGB between the two
/// bracketing anchors, channels rounded half up; out-of-domain values clamp
/// to the end colors; a degenerate domain maps everything to the middle of
/// the palette ramp.
Rgb map_color(std::optional<double> value, const ColorScale& scale);

/// Palette ramp at position t in [0, 1].
Rgb palette_at(const std::vector<Rgb>& palette, double t);

}  // namespace supergrid
