#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "supergrid/clustering.hpp"
#include "supergrid/diagnostics.hpp"
#include "supergrid/layout.hpp"
#include "supergrid/matrix.hpp"

namespace supergrid {

enum class ClusterMethod { kmeans, pam, hierarchical };
enum class DistanceKind { euclidean, cosine, similarity };

/// How one axis is ordered before clustering groups it.
struct OrderSpec {
  enum class Kind { none, mean_ascending, mean_descending, positions, names };
  Kind kind = Kind::none;
  std::vector<std::size_t> positions;  // zero-based, already converted
  std::vector<std::string> names;
};

/// Exactly one source of cluster structure per axis (or none).
struct AxisStructure {
  std::optional<std::string> membership_path;
  std::optional<std::vector<std::string>> membership_labels;
  std::optional<std::size_t> n_clusters;
  bool dendrogram = false;
};

struct PanelConfig {
  std::optional<std::string> path;
  std::optional<std::vector<std::optional<double>>> values;
  PlotType plot_type = PlotType::scatter;
  std::string axis_name;
  std::vector<std::string> obs_colors;
  double point_alpha = 1.0;
  std::vector<std::string> bar_colors;
  std::string line_color = "#000000";
  double smooth_span = 0.75;
};

/// A fully validated run configuration. Paths are resolved against the
/// directory of the config file.
struct RunConfig {
  std::string matrix_path;
  CsvOptions csv;

  std::vector<Rgb> palette;
  std::optional<std::vector<double>> palette_values;
  Rgb na_color{255, 255, 255};

  OrderSpec order_rows;
  OrderSpec order_cols;
  AxisStructure rows;
  AxisStructure cols;
  ClusterMethod method = ClusterMethod::kmeans;
  std::optional<DistanceKind> distance;
  Linkage linkage = Linkage::complete;

  bool smooth_heat = false;
  SmoothStat smooth_stat = SmoothStat::median;

  std::optional<PanelConfig> yt;
  std::optional<PanelConfig> yr;

  FigureSpec figure;  // styling fields only; data fields are filled by the pipeline

  std::uint64_t seed = 0;
  std::optional<std::string> output;

  std::size_t k_min = 2;
  std::size_t k_max = 6;
  StabilityMethod diagnose_method = StabilityMethod::pam;
  DistanceKind diagnose_distance = DistanceKind::cosine;
  std::size_t subsamples = 100;
  double subsample_fraction = 0.9;
};

/// Parses a JSON config document. Unknown keys and malformed values raise
/// ConfigError naming the offending key path. `base_dir` resolves relative
/// paths; `default_seed` applies when the document has no "seed".
RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir,
                       std::uint64_t default_seed = 0);

/// Every key accepted at the top level of a config document.
const std::vector<std::string>& config_keys();

}  // namespace supergrid
