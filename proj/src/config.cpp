#include "supergrid/config.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "supergrid/error.hpp"

namespace supergrid {

namespace {

using nlohmann::json;

const std::vector<std::string> kKeys = {
    "matrix", "matrix_header", "matrix_row_names", "na_tokens",
    "heat_pal", "heat_pal_values", "heat_na_col",
    "order_rows", "order_cols",
    "membership_rows", "membership_cols", "n_clusters_rows", "n_clusters_cols",
    "row_dendrogram", "col_dendrogram", "clustering_method", "cluster_distance", "linkage",
    "smooth_heat", "smooth_heat_type",
    "yt", "yt_plot_type", "yt_axis_name", "yt_obs_col", "yt_point_alpha", "yt_bar_col", "yt_line_col", "yt_smooth_span",
    "yr", "yr_plot_type", "yr_axis_name", "yr_obs_col", "yr_point_alpha", "yr_bar_col", "yr_line_col", "yr_smooth_span",
    "top_axis_side",
    "left_label", "left_label_col", "left_label_col_alpha", "left_label_text_angle", "left_label_text_alignment",
    "left_label_text_size", "left_label_text_col",
    "bottom_label", "bottom_label_col", "bottom_label_col_alpha", "bottom_label_text_angle", "bottom_label_text_alignment",
    "bottom_label_text_size", "bottom_label_text_col",
    "label_padding",
    "grid_hline_col", "grid_vline_col", "grid_line_size",
    "row_title", "column_title", "title_size",
    "legend", "legend_height",
    "width", "height", "plot_ratio", "dendrogram_ratio", "axis_text_size",
    "seed", "output",
    "k_range", "diagnose_method", "diagnose_distance", "subsamples", "subsample_fraction",
};

class Reader {
 public:
  Reader(const json& doc, std::filesystem::path base) : doc_(doc), base_(std::move(base)) {}

  const json* get(const std::string& key) const {
    const auto it = doc_.find(key);
    if (it == doc_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const { throw ConfigError(key, msg); }

  std::optional<bool> boolean(const std::string& key) const {
    const json* v = get(key);
    if (!v) return std::nullopt;
    if (!v->is_boolean()) fail(key, "expected true or false");
    return v->get<bool>();
  }

  std::optional<double> number(const std::string& key) const {
    const json* v = get(key);
    if (!v) return std::nullopt;
    if (!v->is_number()) fail(key, "expected a number");
    const double d = v->get<double>();
    if (!std::isfinite(d)) fail(key, "expected a finite number");
    return d;
  }

  std::optional<double> positive(const std::string& key) const {
    const auto d = number(key);
    if (d && !(*d > 0.0)) fail(key, "expected a positive number");
    return d;
  }

  std::optional<std::uint64_t> count(const std::string& key) const {
    const json* v = get(key);
    if (!v) return std::nullopt;
    if (!v->is_number_integer() || (v->is_number_integer() && !v->is_number_unsigned() && v->get<std::int64_t>() < 0))
      fail(key, "expected a non-negative integer");
    return v->get<std::uint64_t>();
  }

  std::optional<std::string> string(const std::string& key) const {
    const json* v = get(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) fail(key, "expected a string");
    return v->get<std::string>();
  }

  std::optional<std::string> path(const std::string& key) const {
    auto s = string(key);
    if (!s) return s;
    if (s->empty()) fail(key, "expected a non-empty path");
    return resolve(*s);
  }

  std::string resolve(const std::string& p) const {
    const std::filesystem::path fp(p);
    if (fp.is_absolute() || base_.empty()) return fp.string();
    return (base_ / fp).lexically_normal().string();
  }

  std::optional<std::string> color(const std::string& key) const {
    auto s = string(key);
    if (s && !parse_color(*s)) fail(key, "unknown color '" + *s + "'");
    return s;
  }

  /// One color or an array of colors.
  std::vector<std::string> colors(const std::string& key) const {
    const json* v = get(key);
    if (!v) return {};
    if (v->is_string()) return {*color(key)};
    if (!v->is_array() || v->empty()) fail(key, "expected a color or a non-empty array of colors");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      const json& e = (*v)[i];
      const std::string sub = key + "[" + std::to_string(i) + "]";
      if (!e.is_string()) fail(sub, "expected a color string");
      if (!parse_color(e.get<std::string>())) fail(sub, "unknown color '" + e.get<std::string>() + "'");
      out.push_back(e.get<std::string>());
    }
    return out;
  }

  template <typename T, typename Parser>
  std::optional<T> choice(const std::string& key, Parser parse, const std::string& allowed) const {
    const auto s = string(key);
    if (!s) return std::nullopt;
    const std::optional<T> v = parse(*s);
    if (!v) fail(key, "unknown value '" + *s + "' (expected " + allowed + ")");
    return v;
  }

 private:
  const json& doc_;
  std::filesystem::path base_;
};

OrderSpec parse_order(const Reader& r, const std::string& key) {
  OrderSpec out;
  const json* v = r.get(key);
  if (!v) return out;
  if (v->is_string()) {
    const auto s = v->get<std::string>();
    if (s == "none") return out;
    if (s == "mean_asc") out.kind = OrderSpec::Kind::mean_ascending;
    else if (s == "mean_desc") out.kind = OrderSpec::Kind::mean_descending;
    else r.fail(key, "unknown value '" + s + "' (expected none, mean_asc, mean_desc or an array)");
    return out;
  }
  if (!v->is_array() || v->empty()) r.fail(key, "expected a string or a non-empty array");
  const bool by_name = (*v)[0].is_string();
  out.kind = by_name ? OrderSpec::Kind::names : OrderSpec::Kind::positions;
  for (std::size_t i = 0; i < v->size(); ++i) {
    const json& e = (*v)[i];
    const std::string sub = key + "[" + std::to_string(i) + "]";
    if (by_name) {
      if (!e.is_string()) r.fail(sub, "expected a name (entries must all be names or all be positions)");
      out.names.push_back(e.get<std::string>());
    } else {
      if (!e.is_number_integer() || e.get<std::int64_t>() < 1) r.fail(sub, "expected a 1-based position");
      out.positions.push_back(static_cast<std::size_t>(e.get<std::int64_t>() - 1));
    }
  }
  return out;
}

AxisStructure parse_structure(const Reader& r, const std::string& membership_key, const std::string& count_key,
                              const std::string& dendrogram_key) {
  AxisStructure out;
  int sources = 0;
  if (const json* v = r.get(membership_key)) {
    ++sources;
    if (v->is_string()) {
      out.membership_path = r.path(membership_key);
    } else if (v->is_array() && !v->empty()) {
      std::vector<std::string> labels;
      for (std::size_t i = 0; i < v->size(); ++i) {
        const json& e = (*v)[i];
        if (e.is_string()) labels.push_back(e.get<std::string>());
        else if (e.is_number_integer()) labels.push_back(std::to_string(e.get<std::int64_t>()));
        else r.fail(membership_key + "[" + std::to_string(i) + "]", "expected a cluster label");
      }
      out.membership_labels = std::move(labels);
    } else {
      r.fail(membership_key, "expected a path or a non-empty array of labels");
    }
  }
  if (const auto k = r.count(count_key)) {
    ++sources;
    if (*k < 1) r.fail(count_key, "expected at least one cluster");
    out.n_clusters = static_cast<std::size_t>(*k);
  }
  if (r.boolean(dendrogram_key).value_or(false)) {
    ++sources;
    out.dendrogram = true;
  }
  if (sources > 1)
    r.fail(membership_key, "set at most one of " + membership_key + ", " + count_key + " and " + dendrogram_key);
  return out;
}

std::optional<PanelConfig> parse_panel(const Reader& r, const std::string& p) {
  const json* v = r.get(p);
  const auto plot_type = r.choice<PlotType>(p + "_plot_type", parse_plot_type,
                                            "scatter, scatterline, scattersmooth, smooth, bar, line, boxplot or dendrogram");
  if (!v && !(plot_type && *plot_type == PlotType::dendrogram)) {
    for (const char* suffix : {"_plot_type", "_axis_name", "_obs_col", "_point_alpha", "_bar_col", "_line_col", "_smooth_span"})
      if (r.get(p + suffix)) r.fail(p + suffix, "has no effect without " + p);
    return std::nullopt;
  }
  PanelConfig out;
  if (plot_type) out.plot_type = *plot_type;
  if (v) {
    if (v->is_string()) {
      out.path = r.path(p);
    } else if (v->is_array() && !v->empty()) {
      std::vector<std::optional<double>> values;
      for (std::size_t i = 0; i < v->size(); ++i) {
        const json& e = (*v)[i];
        if (e.is_null()) values.emplace_back();
        else if (e.is_number() && std::isfinite(e.get<double>())) values.emplace_back(e.get<double>());
        else r.fail(p + "[" + std::to_string(i) + "]", "expected a finite number or null");
      }
      out.values = std::move(values);
    } else {
      r.fail(p, "expected a path or a non-empty array of numbers");
    }
  }
  out.axis_name = r.string(p + "_axis_name").value_or("");
  out.obs_colors = r.colors(p + "_obs_col");
  if (const auto a = r.number(p + "_point_alpha")) {
    if (*a < 0.0 || *a > 1.0) r.fail(p + "_point_alpha", "expected a value in [0, 1]");
    out.point_alpha = *a;
  }
  out.bar_colors = r.colors(p + "_bar_col");
  if (const auto c = r.color(p + "_line_col")) out.line_color = *c;
  if (const auto s = r.positive(p + "_smooth_span")) out.smooth_span = *s;
  return out;
}

LabelStyle parse_label(const Reader& r, const std::string& p) {
  LabelStyle s;
  if (const auto m = r.choice<LabelMode>(p, parse_label_mode, "auto, variable, cluster or none")) s.mode = *m;
  s.background_colors = r.colors(p + "_col");
  if (const auto a = r.number(p + "_col_alpha")) {
    if (*a < 0.0 || *a > 1.0) r.fail(p + "_col_alpha", "expected a value in [0, 1]");
    s.background_alpha = *a;
  }
  if (const auto a = r.number(p + "_text_angle")) {
    if (*a < 0.0 || *a >= 360.0) r.fail(p + "_text_angle", "expected degrees in [0, 360)");
    s.text_angle = *a;
  }
  if (const auto a = r.choice<TextAlign>(p + "_text_alignment", parse_text_align, "left, center or right")) s.alignment = *a;
  if (const auto z = r.positive(p + "_text_size")) s.text_size = *z;
  if (const auto c = r.color(p + "_text_col")) s.text_color = *c;
  return s;
}

std::optional<DistanceKind> parse_distance(std::string_view s) {
  if (s == "euclidean") return DistanceKind::euclidean;
  if (s == "cosine") return DistanceKind::cosine;
  if (s == "similarity") return DistanceKind::similarity;
  return std::nullopt;
}

std::optional<ClusterMethod> parse_method(std::string_view s) {
  if (s == "kmeans") return ClusterMethod::kmeans;
  if (s == "pam") return ClusterMethod::pam;
  if (s == "hierarchical") return ClusterMethod::hierarchical;
  return std::nullopt;
}

std::optional<StabilityMethod> parse_stability_method(std::string_view s) {
  if (s == "kmeans") return StabilityMethod::kmeans;
  if (s == "pam") return StabilityMethod::pam;
  return std::nullopt;
}

}  // namespace

const std::vector<std::string>& config_keys() { return kKeys; }

RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir, std::uint64_t default_seed) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("$", "the config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) throw ConfigError(key, "unknown key");
  }
  const Reader r(doc, base_dir);
  RunConfig cfg;

  const auto matrix = r.path("matrix");
  if (!matrix) throw ConfigError("matrix", "required key is missing");
  cfg.matrix_path = *matrix;
  if (const auto b = r.boolean("matrix_header")) cfg.csv.header = *b;
  if (const auto b = r.boolean("matrix_row_names")) cfg.csv.row_names = *b;
  if (const json* v = r.get("na_tokens")) {
    if (!v->is_array()) r.fail("na_tokens", "expected an array of strings");
    cfg.csv.na_tokens.clear();
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_string()) r.fail("na_tokens[" + std::to_string(i) + "]", "expected a string");
      cfg.csv.na_tokens.insert((*v)[i].get<std::string>());
    }
  }

  cfg.palette = *named_palette("viridis");
  if (const json* v = r.get("heat_pal")) {
    if (v->is_string()) {
      const auto pal = named_palette(v->get<std::string>());
      if (!pal) r.fail("heat_pal", "unknown palette '" + v->get<std::string>() + "' (expected viridis, BuPu, RdBu or an array)");
      cfg.palette = *pal;
    } else {
      const auto colors = r.colors("heat_pal");
      if (colors.size() < 2) r.fail("heat_pal", "a palette needs at least two colors");
      cfg.palette.clear();
      for (const auto& c : colors) cfg.palette.push_back(parse_color(c)->rgb);
    }
  }
  if (const json* v = r.get("heat_pal_values")) {
    if (!v->is_array()) r.fail("heat_pal_values", "expected an array of numbers");
    std::vector<double> breaks;
    for (std::size_t i = 0; i < v->size(); ++i) {
      const json& e = (*v)[i];
      if (!e.is_number()) r.fail("heat_pal_values[" + std::to_string(i) + "]", "expected a number");
      breaks.push_back(e.get<double>());
      if (i > 0 && !(breaks[i] > breaks[i - 1])) r.fail("heat_pal_values", "values must be strictly ascending");
    }
    if (breaks.size() != cfg.palette.size())
      r.fail("heat_pal_values", "expected " + std::to_string(cfg.palette.size()) + " values, one per palette color");
    cfg.palette_values = std::move(breaks);
  }
  if (const auto c = r.color("heat_na_col")) cfg.na_color = parse_color(*c)->rgb;

  cfg.order_rows = parse_order(r, "order_rows");
  cfg.order_cols = parse_order(r, "order_cols");
  cfg.rows = parse_structure(r, "membership_rows", "n_clusters_rows", "row_dendrogram");
  cfg.cols = parse_structure(r, "membership_cols", "n_clusters_cols", "col_dendrogram");
  if (const auto m = r.choice<ClusterMethod>("clustering_method", parse_method, "kmeans, pam or hierarchical")) cfg.method = *m;
  cfg.distance = r.choice<DistanceKind>("cluster_distance", parse_distance, "euclidean, cosine or similarity");
  if (cfg.method == ClusterMethod::kmeans && cfg.distance && *cfg.distance != DistanceKind::euclidean &&
      (cfg.rows.n_clusters || cfg.cols.n_clusters) && !(cfg.rows.dendrogram || cfg.cols.dendrogram))
    r.fail("cluster_distance", "kmeans clusters in euclidean space only");
  if (const auto l = r.choice<Linkage>("linkage", parse_linkage, "single, complete or average")) cfg.linkage = *l;

  cfg.smooth_heat = r.boolean("smooth_heat").value_or(false);
  if (const auto s = r.choice<SmoothStat>("smooth_heat_type", parse_smooth_stat, "median or mean")) cfg.smooth_stat = *s;

  cfg.yt = parse_panel(r, "yt");
  cfg.yr = parse_panel(r, "yr");

  FigureSpec& f = cfg.figure;
  if (const auto s = r.string("top_axis_side")) {
    if (*s == "left") f.top_axis_side = AxisSide::left;
    else if (*s == "right") f.top_axis_side = AxisSide::right;
    else r.fail("top_axis_side", "unknown value '" + *s + "' (expected left or right)");
  }
  f.left_label = parse_label(r, "left_label");
  f.bottom_label = parse_label(r, "bottom_label");
  if (const auto v = r.number("label_padding")) {
    if (*v < 0.0) r.fail("label_padding", "expected a non-negative number");
    f.label_padding = *v;
  }
  f.grid_hline_color = r.color("grid_hline_col");
  f.grid_vline_color = r.color("grid_vline_col");
  if (const auto v = r.positive("grid_line_size")) f.grid_line_width = *v;
  f.row_title = r.string("row_title").value_or("");
  f.column_title = r.string("column_title").value_or("");
  if (const auto v = r.positive("title_size")) f.title_size = *v;
  if (const auto b = r.boolean("legend")) f.legend = *b;
  if (const auto v = r.positive("legend_height")) f.legend_height = *v;
  if (const auto v = r.positive("width")) f.width = *v;
  if (const auto v = r.positive("height")) f.height = *v;
  if (const auto v = r.number("plot_ratio")) {
    if (*v < 0.0) r.fail("plot_ratio", "expected a non-negative number");
    f.plot_ratio = *v;
  }
  if (const auto v = r.number("dendrogram_ratio")) {
    if (*v < 0.0) r.fail("dendrogram_ratio", "expected a non-negative number");
    f.dendrogram_ratio = *v;
  }
  if (const auto v = r.positive("axis_text_size")) f.axis_text_size = *v;

  cfg.seed = r.count("seed").value_or(default_seed);
  cfg.output = r.path("output");

  if (const json* v = r.get("k_range")) {
    if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number_unsigned() || !(*v)[1].is_number_unsigned())
      r.fail("k_range", "expected [k_min, k_max] with non-negative integers");
    cfg.k_min = (*v)[0].get<std::size_t>();
    cfg.k_max = (*v)[1].get<std::size_t>();
    if (cfg.k_min < 2 || cfg.k_max < cfg.k_min) r.fail("k_range", "expected 2 <= k_min <= k_max");
  }
  if (const auto m = r.choice<StabilityMethod>("diagnose_method", parse_stability_method, "kmeans or pam"))
    cfg.diagnose_method = *m;
  if (const auto d = r.choice<DistanceKind>("diagnose_distance", parse_distance, "euclidean, cosine or similarity"))
    cfg.diagnose_distance = *d;
  if (const auto s = r.count("subsamples")) {
    if (*s < 2) r.fail("subsamples", "expected at least 2 subsamples");
    cfg.subsamples = static_cast<std::size_t>(*s);
  }
  if (const auto fr = r.number("subsample_fraction")) {
    if (!(*fr > 0.0) || *fr > 1.0) r.fail("subsample_fraction", "expected a value in (0, 1]");
    cfg.subsample_fraction = *fr;
  }
  return cfg;
}

}  // namespace supergrid
