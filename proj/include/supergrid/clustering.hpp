#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "supergrid/matrix.hpp"

namespace supergrid {

/// Cluster assignment for one axis. Every label lies in [0, k) and every
/// cluster is non-empty. When medoids are present, medoid i carries label i.
class Membership {
 public:
  Membership(std::vector<std::size_t> labels, std::size_t k,
             std::optional<std::vector<std::size_t>> medoids = std::nullopt,
             std::vector<std::string> label_names = {});

  /// Infers k as max(label) + 1.
  static Membership from_labels(std::vector<std::size_t> labels);
  static Membership single_cluster(std::size_t n);
  static Membership singletons(std::size_t n);

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t k() const noexcept { return k_; }
  std::size_t operator[](std::size_t i) const { return labels_[i]; }
  const std::vector<std::size_t>& labels() const noexcept { return labels_; }
  const std::optional<std::vector<std::size_t>>& medoids() const noexcept { return medoids_; }
  const std::vector<std::string>& label_names() const noexcept { return label_names_; }

  std::vector<std::size_t> cluster_sizes() const;
  std::vector<std::vector<std::size_t>> members() const;
  /// label_names()[c] when set, otherwise the 1-based cluster number.
  std::string display_name(std::size_t cluster) const;

  /// Relabels clusters by first occurrence along the object index.
  Membership canonical() const;
  Membership with_label_names(std::vector<std::string> names) const;
  /// Object i of the result is object order[i] of this membership.
  Membership reordered(const Ordering& order) const;

  friend bool operator==(const Membership&, const Membership&) = default;

 private:
  std::vector<std::size_t> labels_;
  std::size_t k_ = 0;
  std::optional<std::vector<std::size_t>> medoids_;
  std::vector<std::string> label_names_;
};

/// Symmetric n x n matrix with a zero diagonal and non-negative entries.
class DistanceMatrix {
 public:
  DistanceMatrix(std::size_t n, std::vector<double> values);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  const double* row(std::size_t i) const { return d_.data() + i * n_; }
  const std::vector<double>& values() const noexcept { return d_; }

  /// Restriction to the given objects, in the given order.
  DistanceMatrix subset(const std::vector<std::size_t>& objects) const;

 private:
  std::size_t n_;
  std::vector<double> d_;
};

/// Symmetric n x n matrix of cosine similarities in [-1, 1], unit diagonal.
class CosineSimilarityMatrix {
 public:
  CosineSimilarityMatrix(std::size_t n, std::vector<double> values);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return s_[i * n_ + j]; }
  const std::vector<double>& values() const noexcept { return s_; }

 private:
  std::size_t n_;
  std::vector<double> s_;
};

struct Merge {
  std::size_t left;   // node id; leaves are 0..n-1, merge t creates node n+t
  std::size_t right;
  double height;
  std::size_t size;
};

/// Binary merge tree. `left` always holds the child whose smallest leaf index
/// is lower, and leaf_order() is the left-first traversal of that tree.
class Dendrogram {
 public:
  Dendrogram(std::size_t leaves, std::vector<Merge> merges);

  std::size_t leaf_count() const noexcept { return leaves_; }
  const std::vector<Merge>& merges() const noexcept { return merges_; }
  const std::vector<std::size_t>& leaf_order() const noexcept { return leaf_order_; }
  double max_height() const noexcept { return merges_.empty() ? 0.0 : merges_.back().height; }

  /// Tree with leaves renumbered so leaf `order[i]` becomes leaf i. Used when
  /// the axis the tree annotates has been reordered.
  Dendrogram relabeled(const Ordering& order) const;

 private:
  std::size_t leaves_;
  std::vector<Merge> merges_;
  std::vector<std::size_t> leaf_order_;
};

enum class Linkage { single, complete, average };
std::optional<Linkage> parse_linkage(std::string_view name);

// Distances ----------------------------------------------------------------

/// Rows of `m` as vectors. Requires no missing cells and nonzero row norms.
CosineSimilarityMatrix cosine_similarity(const LabeledMatrix& m);

/// arccos(s) / pi, with s clamped into [-1, 1].
double cosine_distance(double s);

DistanceMatrix cosine_distance_matrix(const CosineSimilarityMatrix& s);
/// Treats the values of `m` themselves as cosine similarities (square matrix).
DistanceMatrix distances_from_similarity(const LabeledMatrix& m);
/// Euclidean distance between rows of `m`. Requires no missing cells.
DistanceMatrix euclidean_distance_matrix(const LabeledMatrix& m);

// Clusterers ---------------------------------------------------------------

struct KMeansOptions {
  std::uint64_t seed = 0;
  std::size_t restarts = 10;
  std::size_t max_iter = 100;
};

struct KMeansResult {
  Membership membership;
  double wcss;
  std::vector<double> centers;         // k x d row-major, in canonical label order
  std::size_t best_restart;
  std::vector<double> wcss_history;    // per Lloyd iteration of the winning restart
};

/// Lloyd's algorithm with k-means++ seeding. Rows of `m` are the points.
KMeansResult kmeans_detailed(const LabeledMatrix& m, std::size_t k, const KMeansOptions& options = {});
Membership kmeans(const LabeledMatrix& m, std::size_t k, const KMeansOptions& options = {});

struct PamResult {
  Membership membership;  // carries medoids
  double cost;
  double build_cost;
  std::size_t swaps;
};

/// BUILD then steepest-descent SWAP. `seed` is accepted for interface
/// symmetry with kmeans; the algorithm is fully deterministic.
PamResult pam_detailed(const DistanceMatrix& d, std::size_t k, std::uint64_t seed = 0);
Membership pam(const DistanceMatrix& d, std::size_t k, std::uint64_t seed = 0);

/// Total distance of every object to the nearest of `medoids`.
double medoid_cost(const DistanceMatrix& d, const std::vector<std::size_t>& medoids);

Dendrogram hcluster(const DistanceMatrix& d, Linkage linkage = Linkage::complete);

/// Drops the k-1 highest merges; clusters are labeled in leaf order of first
/// appearance.
Membership cut_dendrogram(const Dendrogram& tree, std::size_t k);

// Membership files -----------------------------------------------------------

/// Two-column CSV (object_name,cluster_label). Distinct label strings become
/// clusters in order of first appearance and are kept as label names. An
/// optional header row "object_name,cluster_label" is skipped.
Membership parse_membership_csv(std::string_view text);
Membership load_membership(const std::string& path);
std::string membership_to_csv(const Membership& mem, const std::vector<std::string>& object_names);

}  // namespace supergrid
