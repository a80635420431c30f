#include "supergrid/color.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "supergrid/error.hpp"

namespace supergrid {

namespace {

std::optional<int> hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return std::nullopt;
}

std::uint8_t round_channel(double x) {
  return static_cast<std::uint8_t>(std::clamp(std::floor(x + 0.5), 0.0, 255.0));
}

Rgb lerp(Rgb a, Rgb b, double f) {
  auto ch = [f](std::uint8_t x, std::uint8_t y) {
    return round_channel(static_cast<double>(x) + (static_cast<double>(y) - static_cast<double>(x)) * f);
  };
  return Rgb{ch(a.r, b.r), ch(a.g, b.g), ch(a.b, b.b)};
}

struct NamedColor {
  std::string_view name;
  Rgb rgb;
};

constexpr NamedColor kNamed[] = {
    {"white", {255, 255, 255}},     {"black", {0, 0, 0}},          {"red", {255, 0, 0}},
    {"green", {0, 255, 0}},         {"blue", {0, 0, 255}},         {"yellow", {255, 255, 0}},
    {"orange", {255, 165, 0}},      {"purple", {160, 32, 240}},    {"grey", {190, 190, 190}},
    {"gray", {190, 190, 190}},      {"darkgrey", {169, 169, 169}}, {"darkgray", {169, 169, 169}},
    {"lightgrey", {211, 211, 211}}, {"lightgray", {211, 211, 211}}, {"steelblue", {70, 130, 180}},
    {"slategray4", {108, 123, 139}}, {"slategrey4", {108, 123, 139}}, {"navy", {0, 0, 128}},
    {"darkred", {139, 0, 0}},       {"darkgreen", {0, 100, 0}},    {"transparent", {255, 255, 255}},
};

}  // namespace

std::string to_hex(Rgb c) {
  static constexpr char digits[] = "0123456789ABCDEF";
  std::string out = "#";
  for (std::uint8_t v : {c.r, c.g, c.b}) {
    out.push_back(digits[v >> 4]);
    out.push_back(digits[v & 0xF]);
  }
  return out;
}

std::optional<Rgba> parse_color(std::string_view text) {
  if (!text.empty() && text.front() == '#') {
    const std::string_view hex = text.substr(1);
    std::vector<int> d;
    for (char c : hex) {
      const auto v = hex_digit(c);
      if (!v) return std::nullopt;
      d.push_back(*v);
    }
    if (d.size() == 3) {
      return Rgba{Rgb{static_cast<std::uint8_t>(d[0] * 17), static_cast<std::uint8_t>(d[1] * 17),
                      static_cast<std::uint8_t>(d[2] * 17)},
                  1.0};
    }
    if (d.size() == 6 || d.size() == 8) {
      Rgba out{Rgb{static_cast<std::uint8_t>(d[0] * 16 + d[1]), static_cast<std::uint8_t>(d[2] * 16 + d[3]),
                   static_cast<std::uint8_t>(d[4] * 16 + d[5])},
               1.0};
      if (d.size() == 8) out.alpha = static_cast<double>(d[6] * 16 + d[7]) / 255.0;
      return out;
    }
    return std::nullopt;
  }
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  for (const auto& named : kNamed) {
    if (named.name == lower) return Rgba{named.rgb, lower == "transparent" ? 0.0 : 1.0};
  }
  for (std::string_view prefix : {"grey", "gray"}) {
    if (lower.size() > prefix.size() && lower.compare(0, prefix.size(), prefix) == 0) {
      const std::string digits = lower.substr(prefix.size());
      if (digits.size() > 3 || !std::all_of(digits.begin(), digits.end(), ::isdigit)) return std::nullopt;
      const int level = std::stoi(digits);
      if (level > 100) return std::nullopt;
      const auto v = static_cast<std::uint8_t>(static_cast<int>(level * 2.55 + 0.5));
      return Rgba{Rgb{v, v, v}, 1.0};
    }
  }
  return std::nullopt;
}

std::optional<std::vector<Rgb>> named_palette(std::string_view name) {
  if (name == "viridis") return std::vector<Rgb>(viridis_table().begin(), viridis_table().end());
  if (name == "BuPu") {
    return std::vector<Rgb>{{237, 248, 251}, {179, 205, 227}, {140, 150, 198}, {136, 86, 167}, {129, 15, 124}};
  }
  if (name == "RdBu") {
    return std::vector<Rgb>{{202, 0, 32}, {244, 165, 130}, {247, 247, 247}, {146, 197, 222}, {5, 113, 176}};
  }
  return std::nullopt;
}

// ColorScale ------------------------------------------------------------------

ColorScale::ColorScale(std::vector<Rgb> palette, Rgb na_color, double min, double max)
    : palette_(std::move(palette)), na_(na_color), min_(min), max_(max) {
  if (palette_.size() < 2) throw Error("a color palette needs at least two colors");
  if (!std::isfinite(min_) || !std::isfinite(max_) || min_ > max_) throw Error("color domain must satisfy min <= max");
}

ColorScale::ColorScale(std::vector<Rgb> palette, std::vector<double> breaks, Rgb na_color)
    : palette_(std::move(palette)), na_(na_color) {
  if (palette_.size() < 2) throw Error("a color palette needs at least two colors");
  if (breaks.size() != palette_.size()) throw Error("palette breaks must match the palette length");
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    if (!std::isfinite(breaks[i])) throw Error("palette breaks must be finite");
    if (i > 0 && !(breaks[i] > breaks[i - 1])) throw Error("palette breaks must be strictly ascending");
  }
  min_ = breaks.front();
  max_ = breaks.back();
  breaks_ = std::move(breaks);
}

ColorScale ColorScale::viridis(double min, double max, Rgb na_color) {
  return ColorScale(*named_palette("viridis"), na_color, min, max);
}

double ColorScale::anchor_value(std::size_t i) const {
  if (breaks_) return (*breaks_)[i];
  if (i + 1 == palette_.size()) return max_;
  return min_ + (max_ - min_) * static_cast<double>(i) / static_cast<double>(palette_.size() - 1);
}

Rgb palette_at(const std::vector<Rgb>& palette, double t) {
  t = std::clamp(t, 0.0, 1.0);
  const double pos = t * static_cast<double>(palette.size() - 1);
  const auto seg = std::min(static_cast<std::size_t>(pos), palette.size() - 2);
  return lerp(palette[seg], palette[seg + 1], pos - static_cast<double>(seg));
}

Rgb map_color(std::optional<double> value, const ColorScale& scale) {
  if (!value) return scale.na_color();
  const auto& pal = scale.palette();
  const double v = *value;
  if (scale.domain_min() == scale.domain_max()) return palette_at(pal, 0.5);
  if (v <= scale.domain_min()) return pal.front();
  if (v >= scale.domain_max()) return pal.back();
  if (const auto& br = scale.breaks()) {
    const auto upper = std::upper_bound(br->begin(), br->end(), v);
    const auto seg = static_cast<std::size_t>(upper - br->begin()) - 1;
    const double f = (v - (*br)[seg]) / ((*br)[seg + 1] - (*br)[seg]);
    return lerp(pal[seg], pal[seg + 1], f);
  }
  return palette_at(pal, (v - scale.domain_min()) / (scale.domain_max() - scale.domain_min()));
}

}  // namespace supergrid
