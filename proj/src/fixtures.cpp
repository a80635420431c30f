#include "supergrid/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "supergrid/clustering.hpp"
#include "supergrid/diagnostics.hpp"
#include "supergrid/random.hpp"

namespace supergrid::fixtures {

namespace {

using nlohmann::ordered_json;

double round_to(double v, double scale) { return std::round(v * scale) / scale; }

std::string numbered(std::string_view prefix, std::size_t i, int width) {
  std::string digits = std::to_string(i);
  if (static_cast<int>(digits.size()) < width) digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
  return std::string(prefix) + digits;
}

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[static_cast<std::size_t>(rng.below(i))]);
}

std::string series_csv(std::string_view name_header, std::string_view value_header, const std::vector<std::string>& names,
                       const std::vector<double>& values) {
  std::string out = std::string(name_header) + "," + std::string(value_header) + "\n";
  for (std::size_t i = 0; i < names.size(); ++i) out += csv_escape(names[i]) + "," + format_number(values[i]) + "\n";
  return out;
}

std::string config(const ordered_json& j) { return j.dump(2) + "\n"; }

const std::vector<std::string> kWords35 = {
    "market", "stocks", "bank",  "economy",  "trade",    "shares",   "prices",   "game",     "team",
    "season", "coach",  "league", "playoff", "score",    "storm",    "rain",     "snow",     "winds",
    "flood",  "hurricane", "forecast", "health", "doctors", "hospital", "vaccine", "virus", "patients",
    "drug",   "apple",  "google", "phone",   "internet", "software", "app",      "data"};

struct RegionColors {
  const char* light;
  const char* dark;
};

constexpr RegionColors kRegions[] = {
    {"#E41A1C4D", "#99000D"}, {"#377EB84D", "#08519C"}, {"#4DAF4A4D", "#006D2C"},
    {"#984EA34D", "#54278F"}, {"#FF7F004D", "#A63603"}, {"#A656284D", "#67000D"},
};

}  // namespace

LabeledMatrix organ58(std::uint64_t seed) {
  Rng rng(derive_seed(seed, 101));
  constexpr std::size_t rows = 58, cols = 9;
  std::vector<std::optional<double>> cells;
  std::vector<std::string> names, years;
  for (std::size_t c = 0; c < cols; ++c) years.push_back(std::to_string(2006 + c));
  for (std::size_t r = 0; r < rows; ++r) {
    names.push_back(numbered("country_", r + 1, 2));
    const double u = rng.uniform();
    const double base = 30.0 * u * u;
    const double trend = 0.8 * rng.uniform() - 0.2;
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = base + trend * static_cast<double>(c) + 1.5 * rng.normal();
      cells.emplace_back(round_to(std::max(v, 0.0), 10.0));
    }
  }
  cells[16 * cols + 3] = std::nullopt;
  return LabeledMatrix(rows, cols, cells, names, years);
}

LabeledMatrix word_similarity(std::size_t topics, std::size_t words_per_topic, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 202));
  constexpr std::size_t dims = 16;
  const std::size_t n = topics * words_per_topic;
  std::vector<std::vector<double>> centers(topics, std::vector<double>(dims));
  for (auto& c : centers)
    for (auto& x : c) x = rng.normal();
  std::vector<std::size_t> slot(n);
  std::iota(slot.begin(), slot.end(), 0);
  shuffle(slot, rng);
  // Word at position slot[w] belongs to topic w / words_per_topic.
  std::vector<std::vector<double>> vecs(n, std::vector<double>(dims));
  for (std::size_t w = 0; w < n; ++w) {
    auto& v = vecs[slot[w]];
    double norm = 0.0;
    for (std::size_t d = 0; d < dims; ++d) {
      v[d] = centers[w / words_per_topic][d] + 0.7 * rng.normal();
      norm += v[d] * v[d];
    }
    norm = std::sqrt(norm);
    for (auto& x : v) x /= norm;
  }
  std::vector<double> sim(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (std::size_t d = 0; d < dims; ++d) s += vecs[i][d] * vecs[j][d];
      s = std::clamp(round_to(s, 1e4), -1.0, 1.0);
      sim[i * n + j] = s;
      sim[j * n + i] = s;
    }
  }
  std::vector<std::string> names(n);
  for (std::size_t w = 0; w < n; ++w)
    names[slot[w]] = numbered("t", w / words_per_topic + 1, 2) + numbered("_w", w % words_per_topic + 1, 1);
  return LabeledMatrix::dense(n, n, std::move(sim), names, names);
}

LabeledMatrix word35(std::uint64_t seed) {
  const LabeledMatrix m = word_similarity(5, 7, seed);
  // Map generated "tTT_wW" names onto the word list (grouped by topic).
  std::vector<std::string> names;
  for (const auto& generated : m.row_names()) {
    const std::size_t topic = static_cast<std::size_t>(std::stoi(generated.substr(1, 2))) - 1;
    const std::size_t word = static_cast<std::size_t>(std::stoi(generated.substr(5))) - 1;
    names.push_back(kWords35[topic * 7 + word]);
  }
  return LabeledMatrix::dense(m.rows(), m.cols(), std::vector<double>(m.raw().begin(), m.raw().end()), names, names);
}

LabeledMatrix word60(std::uint64_t seed) { return word_similarity(12, 5, derive_seed(seed, 60)); }

LabeledMatrix voxel(std::uint64_t seed) {
  Rng rng(derive_seed(seed, 303));
  constexpr std::size_t rows = 120, cols = 200;
  std::vector<std::size_t> rgroup(rows), cgroup(cols);
  for (std::size_t r = 0; r < rows; ++r) rgroup[r] = r < 70 ? 0 : 1;
  for (std::size_t c = 0; c < cols; ++c) cgroup[c] = c < 80 ? 0 : 1;
  std::vector<std::size_t> rperm(rows), cperm(cols);
  std::iota(rperm.begin(), rperm.end(), 0);
  std::iota(cperm.begin(), cperm.end(), 0);
  shuffle(rperm, rng);
  shuffle(cperm, rng);
  constexpr double means[2][2] = {{1.0, -0.5}, {-0.8, 0.6}};
  std::vector<double> values(rows * cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      values[r * cols + c] = round_to(means[rgroup[rperm[r]]][cgroup[cperm[c]]] + 0.5 * rng.normal(), 1e3);
  std::vector<std::string> rn, cn;
  for (std::size_t r = 0; r < rows; ++r) rn.push_back(numbered("img", r + 1, 3));
  for (std::size_t c = 0; c < cols; ++c) cn.push_back(numbered("vox", c + 1, 3));
  return LabeledMatrix::dense(rows, cols, std::move(values), rn, cn);
}

LabeledMatrix blobs3(std::uint64_t seed) {
  Rng rng(derive_seed(seed, 404));
  // Equilateral triangle of side 10 centred on the origin.
  const double radius = 10.0 / std::sqrt(3.0);
  const double centers[3][2] = {{0.0, radius}, {-5.0, -radius / 2.0}, {5.0, -radius / 2.0}};
  std::vector<double> values;
  std::vector<std::string> names;
  for (std::size_t b = 0; b < 3; ++b) {
    for (std::size_t i = 0; i < 10; ++i) {
      values.push_back(round_to(centers[b][0] + 0.05 * rng.normal(), 1e4));
      values.push_back(round_to(centers[b][1] + 0.05 * rng.normal(), 1e4));
      names.push_back(numbered("p", names.size() + 1, 2));
    }
  }
  return LabeledMatrix::dense(30, 2, std::move(values), names, {"x", "y"});
}

std::vector<FixtureFile> bundled(std::uint64_t seed) {
  std::vector<FixtureFile> files;

  // Organ donation style: ordered rows, right bars, top scatterline.
  {
    const LabeledMatrix m = organ58(seed);
    Rng rng(derive_seed(seed, 102));
    const auto ranks = rng.sample_without_replacement(188, m.rows());
    std::vector<double> hdi;
    std::vector<std::string> light, dark;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      hdi.push_back(static_cast<double>(ranks[r] + 1));
      const auto& region = kRegions[rng.below(std::size(kRegions))];
      light.emplace_back(region.light);
      dark.emplace_back(region.dark);
    }
    std::vector<double> totals;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      double s = 0.0;
      for (std::size_t r = 0; r < m.rows(); ++r)
        if (const auto v = m.at(r, c)) s += *v;
      totals.push_back(round_to(s, 10.0));
    }
    files.push_back({"organ58.csv", matrix_to_csv(m)});
    files.push_back({"organ58_hdi.csv", series_csv("country", "hdi_rank", m.row_names(), hdi)});
    files.push_back({"organ58_year.csv", series_csv("year", "transplants", m.col_names(), totals)});
    ordered_json j;
    j["matrix"] = "organ58.csv";
    j["heat_pal"] = "BuPu";
    j["heat_na_col"] = "white";
    j["order_rows"] = "mean_asc";
    j["grid_vline_col"] = "white";
    j["yr"] = "organ58_hdi.csv";
    j["yr_plot_type"] = "bar";
    j["yr_axis_name"] = "Human development ranking";
    j["yr_bar_col"] = dark;
    j["yr_obs_col"] = light;
    j["yt"] = "organ58_year.csv";
    j["yt_plot_type"] = "scatterline";
    j["yt_axis_name"] = "Transplants per year";
    j["left_label_col"] = light;
    j["bottom_label_col"] = "white";
    j["bottom_label_text_angle"] = 90;
    j["bottom_label_text_alignment"] = "right";
    j["output"] = "organ58.svg";
    files.push_back({"organ58.json", config(j)});
  }

  // 35-word similarity matrix with dendrograms on both axes.
  {
    files.push_back({"word35.csv", matrix_to_csv(word35(seed))});
    ordered_json j;
    j["matrix"] = "word35.csv";
    j["row_dendrogram"] = true;
    j["col_dendrogram"] = true;
    j["cluster_distance"] = "similarity";
    j["linkage"] = "complete";
    j["grid_hline_col"] = "white";
    j["grid_vline_col"] = "white";
    j["bottom_label_text_angle"] = 90;
    j["output"] = "word35.svg";
    files.push_back({"word35.json", config(j)});
  }

  // 60-word similarity matrix in 12 PAM clusters, silhouette bars, smoothed.
  {
    const LabeledMatrix m = word60(seed);
    const DistanceMatrix d = distances_from_similarity(m);
    const Membership mem = pam(d, 12);
    const auto sil = silhouette(d, mem).sil;
    std::vector<std::size_t> order(sil.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sil[a] < sil[b]; });
    std::vector<std::size_t> positions;
    for (std::size_t i : order) positions.push_back(i + 1);
    std::vector<double> rounded;
    for (double s : sil) rounded.push_back(round_to(s, 1e6));
    files.push_back({"word60.csv", matrix_to_csv(m)});
    files.push_back({"word60_membership.csv", membership_to_csv(mem, m.row_names())});
    files.push_back({"word60_silhouette.csv", series_csv("word", "silhouette", m.col_names(), rounded)});
    ordered_json j;
    j["matrix"] = "word60.csv";
    j["membership_rows"] = "word60_membership.csv";
    j["membership_cols"] = "word60_membership.csv";
    j["yt"] = "word60_silhouette.csv";
    j["yt_axis_name"] = "Cosine silhouette width";
    j["yt_plot_type"] = "bar";
    j["yt_bar_col"] = "grey35";
    j["order_rows"] = positions;
    j["order_cols"] = positions;
    j["bottom_label_text_angle"] = 90;
    j["bottom_label_text_alignment"] = "right";
    j["left_label_text_alignment"] = "right";
    j["smooth_heat"] = true;
    j["output"] = "word60.svg";
    files.push_back({"word60.json", config(j)});

    ordered_json dj;
    dj["matrix"] = "word60.csv";
    dj["k_range"] = {8, 14};
    dj["diagnose_method"] = "pam";
    dj["diagnose_distance"] = "similarity";
    dj["subsamples"] = 20;
    dj["subsample_fraction"] = 0.9;
    dj["output"] = "word60_diagnose.csv";
    files.push_back({"word60_diagnose.json", config(dj)});
  }

  // Two-block response matrix with K-means on both axes.
  {
    const LabeledMatrix m = voxel(seed);
    Rng rng(derive_seed(seed, 304));
    // Column-block membership is recoverable from the column means' sign.
    std::vector<double> cor;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      double mean = 0.0;
      for (std::size_t r = 0; r < m.rows(); ++r) mean += *m.at(r, c);
      mean /= static_cast<double>(m.rows());
      cor.push_back(round_to((mean > 0.2 ? 0.45 : 0.2) + 0.1 * rng.normal(), 1e3));
    }
    files.push_back({"voxel.csv", matrix_to_csv(m)});
    files.push_back({"voxel_cor.csv", series_csv("voxel", "correlation", m.col_names(), cor)});
    ordered_json j;
    j["matrix"] = "voxel.csv";
    j["heat_pal"] = "RdBu";
    j["n_clusters_rows"] = 2;
    j["n_clusters_cols"] = 2;
    j["clustering_method"] = "kmeans";
    j["yt"] = "voxel_cor.csv";
    j["yt_axis_name"] = "Prediction correlation";
    j["yt_obs_col"] = "slategray4";
    j["yt_point_alpha"] = 0.6;
    j["left_label"] = "none";
    j["bottom_label"] = "none";
    j["grid_hline_col"] = "white";
    j["grid_vline_col"] = "white";
    j["row_title"] = "Validation images (120)";
    j["column_title"] = "Voxels (200)";
    j["seed"] = 7;
    j["output"] = "voxel.svg";
    files.push_back({"voxel.json", config(j)});
    j["smooth_heat"] = true;
    j["yt_plot_type"] = "boxplot";
    j["output"] = "voxel_smooth.svg";
    files.push_back({"voxel_smooth.json", config(j)});
  }

  // Planted three-blob point set for the stability diagnostics.
  {
    files.push_back({"blobs3.csv", matrix_to_csv(blobs3(seed))});
    ordered_json j;
    j["matrix"] = "blobs3.csv";
    j["k_range"] = {2, 6};
    j["diagnose_method"] = "pam";
    j["diagnose_distance"] = "euclidean";
    j["subsamples"] = 100;
    j["subsample_fraction"] = 0.9;
    j["seed"] = 7;
    j["output"] = "blobs3_diagnose.csv";
    files.push_back({"blobs3.json", config(j)});
  }
  return files;
}

}  // namespace supergrid::fixtures
