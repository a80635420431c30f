#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "supergrid/clustering.hpp"
#include "supergrid/matrix.hpp"

namespace supergrid {

/// Cosine-silhouette widths. For object i in cluster C_i:
///   a(i)   = (1/|C_i|) * sum_{j in C_i} d(i, j)     (self term included)
///   b(i)   = min over clusters C != C_i of mean_{j in C} d(i, j)
///   sil(i) = b(i) - a(i)                            (no max(a, b) normalization)
/// A singleton cluster therefore has a(i) = 0.
struct SilhouetteReport {
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> sil;
  std::vector<double> cluster_mean;
  double mean = 0.0;
};

SilhouetteReport silhouette(const DistanceMatrix& d, const Membership& mem);

/// Pair-counting Jaccard index between two partitions restricted to `shared`:
/// |P_a & P_b| / |P_a | P_b| where P_x holds the unordered co-clustered pairs.
/// Two empty pair sets compare as 1.
double jaccard(const Membership& a, const Membership& b, std::span<const std::size_t> shared);

/// Same index on raw label vectors (any integer labels; entries outside
/// `shared` are ignored).
double jaccard_labels(std::span<const std::size_t> a, std::span<const std::size_t> b,
                      std::span<const std::size_t> shared);

enum class StabilityMethod { kmeans, pam };

struct StabilityOptions {
  std::size_t k_min = 2;
  std::size_t k_max = 2;
  StabilityMethod method = StabilityMethod::pam;
  std::size_t subsamples = 100;
  double fraction = 0.9;
  std::uint64_t seed = 0;
  std::size_t kmeans_restarts = 10;
};

struct StabilityReport {
  std::size_t k = 0;
  std::size_t subsample_count = 0;
  double subsample_fraction = 0.0;
  double mean_pairwise_jaccard = 0.0;
  double mean_silhouette = 0.0;
};

/// For every k in [k_min, k_max]: cluster `subsamples` seeded subsamples of
/// size ceil(fraction * n) drawn without replacement, then report the mean
/// Jaccard index over all subsample pairs (on their shared objects) and the
/// mean cosine-silhouette width. Rows of `m` are the objects; distances for
/// PAM and the silhouette are cosine distances between rows.
std::vector<StabilityReport> stability_curve(const LabeledMatrix& m, const StabilityOptions& options);

/// Same, over a precomputed distance matrix (PAM only).
std::vector<StabilityReport> stability_curve(const DistanceMatrix& d, const StabilityOptions& options);

}  // namespace supergrid
