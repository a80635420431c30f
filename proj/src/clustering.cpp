#include "supergrid/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "supergrid/error.hpp"
#include "supergrid/kernels.hpp"
#include "supergrid/random.hpp"

namespace supergrid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_complete(const LabeledMatrix& m, const char* what) {
  if (m.has_missing()) {
    throw Error(std::string(what) + " requires a matrix without missing cells (" +
                std::to_string(m.missing_count()) + " missing)");
  }
}

}  // namespace

// Membership -------------------------------------------------------------------

Membership::Membership(std::vector<std::size_t> labels, std::size_t k,
                       std::optional<std::vector<std::size_t>> medoids,
                       std::vector<std::string> label_names)
    : labels_(std::move(labels)), k_(k), medoids_(std::move(medoids)), label_names_(std::move(label_names)) {
  if (labels_.empty()) throw Error("membership must cover at least one object");
  if (k_ == 0) throw Error("membership must have at least one cluster");
  std::vector<std::size_t> sizes(k_, 0);
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] >= k_) {
      throw Error("object " + std::to_string(i) + " has label " + std::to_string(labels_[i]) +
                  " outside 0.." + std::to_string(k_ - 1));
    }
    ++sizes[labels_[i]];
  }
  for (std::size_t c = 0; c < k_; ++c)
    if (sizes[c] == 0) throw Error("cluster " + std::to_string(c) + " is empty");
  if (medoids_) {
    if (medoids_->size() != k_) throw Error("medoid count does not match cluster count");
    for (std::size_t c = 0; c < k_; ++c) {
      const std::size_t m = (*medoids_)[c];
      if (m >= labels_.size() || labels_[m] != c)
        throw Error("medoid of cluster " + std::to_string(c) + " is not a member of it");
    }
  }
  if (!label_names_.empty() && label_names_.size() != k_)
    throw Error("label name count does not match cluster count");
}

Membership Membership::from_labels(std::vector<std::size_t> labels) {
  if (labels.empty()) throw Error("membership must cover at least one object");
  const std::size_t k = *std::max_element(labels.begin(), labels.end()) + 1;
  return Membership(std::move(labels), k);
}

Membership Membership::single_cluster(std::size_t n) {
  return Membership(std::vector<std::size_t>(n, 0), 1);
}

Membership Membership::singletons(std::size_t n) {
  std::vector<std::size_t> labels(n);
  std::iota(labels.begin(), labels.end(), std::size_t{0});
  return Membership(std::move(labels), n);
}

std::vector<std::size_t> Membership::cluster_sizes() const {
  std::vector<std::size_t> sizes(k_, 0);
  for (std::size_t l : labels_) ++sizes[l];
  return sizes;
}

std::vector<std::vector<std::size_t>> Membership::members() const {
  std::vector<std::vector<std::size_t>> out(k_);
  for (std::size_t i = 0; i < labels_.size(); ++i) out[labels_[i]].push_back(i);
  return out;
}

std::string Membership::display_name(std::size_t cluster) const {
  if (!label_names_.empty()) return label_names_.at(cluster);
  return std::to_string(cluster + 1);
}

Membership Membership::canonical() const {
  constexpr std::size_t unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> remap(k_, unset);
  std::size_t next = 0;
  for (std::size_t l : labels_)
    if (remap[l] == unset) remap[l] = next++;
  std::vector<std::size_t> labels(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) labels[i] = remap[labels_[i]];
  std::optional<std::vector<std::size_t>> medoids;
  if (medoids_) {
    medoids.emplace(k_);
    for (std::size_t c = 0; c < k_; ++c) (*medoids)[remap[c]] = (*medoids_)[c];
  }
  std::vector<std::string> names;
  if (!label_names_.empty()) {
    names.resize(k_);
    for (std::size_t c = 0; c < k_; ++c) names[remap[c]] = label_names_[c];
  }
  return Membership(std::move(labels), k_, std::move(medoids), std::move(names));
}

Membership Membership::with_label_names(std::vector<std::string> names) const {
  return Membership(labels_, k_, medoids_, std::move(names));
}

Membership Membership::reordered(const Ordering& order) const {
  if (order.size() != labels_.size()) {
    throw Error("membership covers " + std::to_string(labels_.size()) + " objects, axis has " +
                std::to_string(order.size()));
  }
  std::optional<std::vector<std::size_t>> medoids;
  if (medoids_) {
    const Ordering inv = order.inverse();
    medoids.emplace();
    for (std::size_t m : *medoids_) medoids->push_back(inv[m]);
  }
  return Membership(permute(labels_, order), k_, std::move(medoids), label_names_);
}

// Distance containers ----------------------------------------------------------

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> values) : n_(n), d_(std::move(values)) {
  if (n_ == 0) throw Error("distance matrix must cover at least one object");
  if (d_.size() != n_ * n_) throw Error("distance matrix storage does not match n*n");
  for (std::size_t i = 0; i < n_; ++i) {
    if (d_[i * n_ + i] != 0.0) throw Error("distance matrix diagonal entry " + std::to_string(i) + " is not zero");
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double a = d_[i * n_ + j];
      if (!std::isfinite(a) || a < 0.0)
        throw Error("distance (" + std::to_string(i) + "," + std::to_string(j) + ") is negative or not finite");
      if (a != d_[j * n_ + i])
        throw Error("distance matrix is not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
}

DistanceMatrix DistanceMatrix::subset(const std::vector<std::size_t>& objects) const {
  const std::size_t m = objects.size();
  std::vector<double> out(m * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) out[a * m + b] = (*this)(objects[a], objects[b]);
  return DistanceMatrix(m, std::move(out));
}

CosineSimilarityMatrix::CosineSimilarityMatrix(std::size_t n, std::vector<double> values)
    : n_(n), s_(std::move(values)) {
  if (s_.size() != n_ * n_) throw Error("similarity matrix storage does not match n*n");
  for (std::size_t i = 0; i < n_; ++i) {
    if (s_[i * n_ + i] != 1.0) throw Error("similarity matrix diagonal entry " + std::to_string(i) + " is not 1");
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double a = s_[i * n_ + j];
      if (!(std::fabs(a) <= 1.0 + 1e-12)) throw Error("similarity outside [-1, 1]");
      if (a != s_[j * n_ + i]) throw Error("similarity matrix is not symmetric");
    }
  }
}

std::optional<Linkage> parse_linkage(std::string_view name) {
  if (name == "single") return Linkage::single;
  if (name == "complete") return Linkage::complete;
  if (name == "average") return Linkage::average;
  return std::nullopt;
}

// Distances ------------------------------------------------------------------------

CosineSimilarityMatrix cosine_similarity(const LabeledMatrix& m) {
  require_complete(m, "cosine similarity");
  const std::size_t n = m.rows();
  const auto& k = kernels::active();
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = m.row(i);
    norms[i] = std::sqrt(k.dot(x.data(), x.data(), x.size()));
    if (norms[i] == 0.0)
      throw Error("row " + std::to_string(i + 1) + " ('" + m.row_names()[i] + "') has zero norm");
  }
  std::vector<double> s(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i * n + i] = 1.0;
    const auto xi = m.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto xj = m.row(j);
      double v = k.dot(xi.data(), xj.data(), xi.size()) / (norms[i] * norms[j]);
      v = std::clamp(v, -1.0, 1.0);
      s[i * n + j] = v;
      s[j * n + i] = v;
    }
  }
  return CosineSimilarityMatrix(n, std::move(s));
}

double cosine_distance(double s) { return std::acos(std::clamp(s, -1.0, 1.0)) / std::numbers::pi; }

DistanceMatrix cosine_distance_matrix(const CosineSimilarityMatrix& s) {
  const std::size_t n = s.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = cosine_distance(s(i, j));
      d[i * n + j] = v;
      d[j * n + i] = v;
    }
  }
  return DistanceMatrix(n, std::move(d));
}

DistanceMatrix distances_from_similarity(const LabeledMatrix& m) {
  require_complete(m, "similarity distances");
  if (m.rows() != m.cols()) throw Error("similarity matrix must be square");
  const std::size_t n = m.rows();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // Symmetrize so tiny asymmetries in stored similarities cannot break the invariant.
      const double s = 0.5 * (*m.at(i, j) + *m.at(j, i));
      const double v = cosine_distance(s);
      d[i * n + j] = v;
      d[j * n + i] = v;
    }
  }
  return DistanceMatrix(n, std::move(d));
}

DistanceMatrix euclidean_distance_matrix(const LabeledMatrix& m) {
  require_complete(m, "euclidean distances");
  const std::size_t n = m.rows();
  const auto& k = kernels::active();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto xi = m.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = std::sqrt(k.squared_distance(xi.data(), m.row(j).data(), xi.size()));
      d[i * n + j] = v;
      d[j * n + i] = v;
    }
  }
  return DistanceMatrix(n, std::move(d));
}

// K-means ---------------------------------------------------------------------------

namespace {

struct LloydRun {
  std::vector<std::size_t> labels;
  std::vector<double> centers;
  double wcss = kInf;
  std::vector<double> history;
};

class KMeansSolver {
 public:
  KMeansSolver(const LabeledMatrix& m, std::size_t k)
      : points_(m.raw()), n_(m.rows()), dim_(m.cols()), k_(k), kern_(kernels::active()) {}

  LloydRun run(std::uint64_t seed, std::size_t max_iter) const {
    Rng rng(seed);
    LloydRun out;
    out.centers = seed_centers(rng);
    out.labels.assign(n_, 0);
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
      bool changed = assign(out.labels, out.centers);
      changed = fill_empty(out.labels, out.centers) || changed;
      if (!changed && iter > 0) break;
      update(out.labels, out.centers);
      out.wcss = cost(out.labels, out.centers);
      out.history.push_back(out.wcss);
    }
    return out;
  }

 private:
  const double* point(std::size_t i) const { return points_.data() + i * dim_; }

  double dist2(std::size_t i, const std::vector<double>& centers, std::size_t c) const {
    return kern_.squared_distance(point(i), centers.data() + c * dim_, dim_);
  }

  // k-means++: first center uniform, later centers with probability
  // proportional to squared distance from the nearest chosen center.
  std::vector<double> seed_centers(Rng& rng) const {
    std::vector<double> centers(k_ * dim_);
    std::vector<bool> chosen(n_, false);
    std::vector<double> nearest(n_, kInf);
    auto place = [&](std::size_t slot, std::size_t idx) {
      chosen[idx] = true;
      std::copy_n(point(idx), dim_, centers.begin() + static_cast<std::ptrdiff_t>(slot * dim_));
      for (std::size_t i = 0; i < n_; ++i) nearest[i] = std::min(nearest[i], dist2(i, centers, slot));
    };
    place(0, static_cast<std::size_t>(rng.below(n_)));
    for (std::size_t c = 1; c < k_; ++c) {
      double total = 0.0;
      for (std::size_t i = 0; i < n_; ++i)
        if (!chosen[i]) total += nearest[i];
      std::size_t pick = n_;
      if (total > 0.0) {
        const double r = rng.uniform() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
          if (chosen[i] || nearest[i] == 0.0) continue;
          acc += nearest[i];
          pick = i;
          if (acc > r) break;
        }
      } else {
        std::size_t remaining = static_cast<std::size_t>(rng.below(n_ - c));
        for (std::size_t i = 0; i < n_; ++i) {
          if (chosen[i]) continue;
          if (remaining == 0) {
            pick = i;
            break;
          }
          --remaining;
        }
      }
      place(c, pick);
    }
    return centers;
  }

  bool assign(std::vector<std::size_t>& labels, const std::vector<double>& centers) const {
    bool changed = false;
    for (std::size_t i = 0; i < n_; ++i) {
      std::size_t best = 0;
      double best_d = dist2(i, centers, 0);
      for (std::size_t c = 1; c < k_; ++c) {
        const double d = dist2(i, centers, c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (labels[i] != best) {
        labels[i] = best;
        changed = true;
      }
    }
    return changed;
  }

  // An empty cluster takes the point farthest from its current center, drawn
  // from clusters that keep at least one other member.
  bool fill_empty(std::vector<std::size_t>& labels, std::vector<double>& centers) const {
    bool changed = false;
    for (;;) {
      std::vector<std::size_t> sizes(k_, 0);
      for (std::size_t l : labels) ++sizes[l];
      const auto empty = std::find(sizes.begin(), sizes.end(), std::size_t{0});
      if (empty == sizes.end()) return changed;
      const auto target = static_cast<std::size_t>(empty - sizes.begin());
      std::size_t far = n_;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n_; ++i) {
        if (sizes[labels[i]] < 2) continue;
        const double d = dist2(i, centers, labels[i]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      labels[far] = target;
      std::copy_n(point(far), dim_, centers.begin() + static_cast<std::ptrdiff_t>(target * dim_));
      changed = true;
    }
  }

  void update(const std::vector<std::size_t>& labels, std::vector<double>& centers) const {
    std::fill(centers.begin(), centers.end(), 0.0);
    std::vector<std::size_t> counts(k_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
      kern_.accumulate(centers.data() + labels[i] * dim_, point(i), dim_);
      ++counts[labels[i]];
    }
    for (std::size_t c = 0; c < k_; ++c) {
      const double inv = 1.0 / static_cast<double>(counts[c]);
      for (std::size_t j = 0; j < dim_; ++j) centers[c * dim_ + j] *= inv;
    }
  }

  double cost(const std::vector<std::size_t>& labels, const std::vector<double>& centers) const {
    double total = 0.0;
    for (std::size_t i = 0; i < n_; ++i) total += dist2(i, centers, labels[i]);
    return total;
  }

  std::span<const double> points_;
  std::size_t n_;
  std::size_t dim_;
  std::size_t k_;
  const kernels::KernelTable& kern_;
};

}  // namespace

KMeansResult kmeans_detailed(const LabeledMatrix& m, std::size_t k, const KMeansOptions& options) {
  require_complete(m, "k-means");
  if (k == 0) throw Error("k-means requires k >= 1");
  if (k > m.rows()) {
    throw Error("k-means requires k <= number of objects (k = " + std::to_string(k) + ", n = " +
                std::to_string(m.rows()) + ")");
  }
  if (options.restarts == 0) throw Error("k-means requires at least one restart");
  if (options.max_iter == 0) throw Error("k-means requires max_iter >= 1");

  const KMeansSolver solver(m, k);
  LloydRun best;
  std::size_t best_restart = 0;
  for (std::size_t r = 0; r < options.restarts; ++r) {
    LloydRun run = solver.run(derive_seed(options.seed, r), options.max_iter);
    if (r == 0 || run.wcss < best.wcss) {
      best = std::move(run);
      best_restart = r;
    }
  }

  Membership raw(best.labels, k);
  Membership canon = raw.canonical();
  const std::size_t dim = m.cols();
  std::vector<double> centers(k * dim);
  // Position of each original label in canonical order.
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const std::size_t from = raw[i];
    const std::size_t to = canon[i];
    std::copy_n(best.centers.begin() + static_cast<std::ptrdiff_t>(from * dim), dim,
                centers.begin() + static_cast<std::ptrdiff_t>(to * dim));
  }
  return KMeansResult{std::move(canon), best.wcss, std::move(centers), best_restart, std::move(best.history)};
}

Membership kmeans(const LabeledMatrix& m, std::size_t k, const KMeansOptions& options) {
  return kmeans_detailed(m, k, options).membership;
}

// PAM ----------------------------------------------------------------------------------

double medoid_cost(const DistanceMatrix& d, const std::vector<std::size_t>& medoids) {
  double total = 0.0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    double best = kInf;
    for (std::size_t m : medoids) best = std::min(best, d(j, m));
    total += best;
  }
  return total;
}

namespace {

struct NearestMedoids {
  std::vector<std::size_t> slot;  // index into the medoid list
  std::vector<double> first;
  std::vector<double> second;
};

NearestMedoids nearest_medoids(const DistanceMatrix& d, const std::vector<std::size_t>& medoids) {
  const std::size_t n = d.size();
  NearestMedoids out{std::vector<std::size_t>(n, 0), std::vector<double>(n, kInf),
                     std::vector<double>(n, kInf)};
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t s = 0; s < medoids.size(); ++s) {
      const double v = d(j, medoids[s]);
      if (v < out.first[j]) {
        out.second[j] = out.first[j];
        out.first[j] = v;
        out.slot[j] = s;
      } else if (v < out.second[j]) {
        out.second[j] = v;
      }
    }
  }
  return out;
}

}  // namespace

PamResult pam_detailed(const DistanceMatrix& d, std::size_t k, std::uint64_t /*seed*/) {
  const std::size_t n = d.size();
  if (k == 0 || k > n) {
    throw Error("PAM requires 1 <= k <= n (k = " + std::to_string(k) + ", n = " + std::to_string(n) + ")");
  }

  // BUILD
  std::vector<std::size_t> medoids;
  std::vector<bool> is_medoid(n, false);
  {
    std::size_t first = 0;
    double best = kInf;
    for (std::size_t i = 0; i < n; ++i) {
      const double total = kernels::sum(std::span<const double>(d.row(i), n));
      if (total < best) {
        best = total;
        first = i;
      }
    }
    medoids.push_back(first);
    is_medoid[first] = true;
  }
  std::vector<double> nearest(d.row(medoids[0]), d.row(medoids[0]) + n);
  while (medoids.size() < k) {
    std::size_t pick = n;
    double best_gain = -1.0;
    for (std::size_t c = 0; c < n; ++c) {
      if (is_medoid[c]) continue;
      double gain = 0.0;
      const double* dc = d.row(c);
      for (std::size_t j = 0; j < n; ++j) gain += std::max(nearest[j] - dc[j], 0.0);
      if (gain > best_gain) {
        best_gain = gain;
        pick = c;
      }
    }
    medoids.push_back(pick);
    is_medoid[pick] = true;
    const double* dp = d.row(pick);
    for (std::size_t j = 0; j < n; ++j) nearest[j] = std::min(nearest[j], dp[j]);
  }
  const double build_cost = medoid_cost(d, medoids);

  // SWAP: best (most negative) change in total cost over all medoid / non-medoid pairs.
  double cost = build_cost;
  std::size_t swaps = 0;
  for (;;) {
    const NearestMedoids near = nearest_medoids(d, medoids);
    double best_delta = 0.0;
    std::size_t best_slot = 0;
    std::size_t best_candidate = n;
    for (std::size_t s = 0; s < medoids.size(); ++s) {
      for (std::size_t o = 0; o < n; ++o) {
        if (is_medoid[o]) continue;
        const double* dov = d.row(o);
        double delta = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          const double keep = near.slot[j] == s ? near.second[j] : near.first[j];
          delta += std::min(dov[j], keep) - near.first[j];
        }
        if (delta < best_delta) {
          best_delta = delta;
          best_slot = s;
          best_candidate = o;
        }
      }
    }
    if (best_candidate == n) break;
    std::vector<std::size_t> trial = medoids;
    trial[best_slot] = best_candidate;
    const double trial_cost = medoid_cost(d, trial);
    // Rounding in the incremental delta can suggest a swap that does not
    // actually lower the recomputed cost; stop there.
    if (!(trial_cost < cost)) break;
    is_medoid[medoids[best_slot]] = false;
    is_medoid[best_candidate] = true;
    medoids = std::move(trial);
    cost = trial_cost;
    ++swaps;
  }

  // Label by nearest medoid; medoids are visited in ascending object index so
  // ties go to the lower medoid index.
  std::sort(medoids.begin(), medoids.end());
  std::vector<std::size_t> labels(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    double best = kInf;
    for (std::size_t s = 0; s < k; ++s) {
      if (d(j, medoids[s]) < best) {
        best = d(j, medoids[s]);
        labels[j] = s;
      }
    }
  }
  for (std::size_t s = 0; s < k; ++s) labels[medoids[s]] = s;
  Membership mem = Membership(std::move(labels), k, medoids).canonical();
  return PamResult{std::move(mem), medoid_cost(d, medoids), build_cost, swaps};
}

Membership pam(const DistanceMatrix& d, std::size_t k, std::uint64_t seed) {
  return pam_detailed(d, k, seed).membership;
}

// Hierarchical ----------------------------------------------------------------------------

Dendrogram::Dendrogram(std::size_t leaves, std::vector<Merge> merges) : leaves_(leaves), merges_(std::move(merges)) {
  if (leaves_ == 0) throw Error("dendrogram needs at least one leaf");
  if (merges_.size() != leaves_ - 1)
    throw Error("dendrogram with " + std::to_string(leaves_) + " leaves needs " + std::to_string(leaves_ - 1) + " merges");
  const std::size_t nodes = 2 * leaves_ - 1;
  std::vector<std::size_t> min_leaf(nodes), size(nodes, 1);
  std::vector<bool> used(nodes, false);
  std::iota(min_leaf.begin(), min_leaf.begin() + static_cast<std::ptrdiff_t>(leaves_), std::size_t{0});
  double prev = -kInf;
  for (std::size_t t = 0; t < merges_.size(); ++t) {
    Merge& m = merges_[t];
    const std::size_t id = leaves_ + t;
    if (m.left >= id || m.right >= id || m.left == m.right || used[m.left] || used[m.right])
      throw Error("dendrogram merge " + std::to_string(t) + " references an invalid or reused node");
    if (!std::isfinite(m.height) || m.height < prev)
      throw Error("dendrogram merge heights must be finite and non-decreasing");
    prev = m.height;
    used[m.left] = used[m.right] = true;
    if (min_leaf[m.left] > min_leaf[m.right]) std::swap(m.left, m.right);
    min_leaf[id] = min_leaf[m.left];
    size[id] = size[m.left] + size[m.right];
    m.size = size[id];
  }
  leaf_order_.reserve(leaves_);
  std::vector<std::size_t> stack{nodes - 1};
  while (!stack.empty()) {
    const std::size_t node = stack.back();
    stack.pop_back();
    if (node < leaves_) {
      leaf_order_.push_back(node);
    } else {
      const Merge& m = merges_[node - leaves_];
      stack.push_back(m.right);
      stack.push_back(m.left);
    }
  }
}

Dendrogram Dendrogram::relabeled(const Ordering& order) const {
  if (order.size() != leaves_) throw Error("ordering length does not match dendrogram leaf count");
  const Ordering inv = order.inverse();
  std::vector<Merge> merges = merges_;
  for (Merge& m : merges) {
    if (m.left < leaves_) m.left = inv[m.left];
    if (m.right < leaves_) m.right = inv[m.right];
  }
  return Dendrogram(leaves_, std::move(merges));
}

Dendrogram hcluster(const DistanceMatrix& d, Linkage linkage) {
  const std::size_t n = d.size();
  if (n < 2) throw Error("hierarchical clustering needs at least two objects");
  std::vector<double> w = d.values();
  std::vector<bool> active(n, true);
  std::vector<std::size_t> node(n), size(n, 1);
  std::iota(node.begin(), node.end(), std::size_t{0});
  std::vector<Merge> merges;
  merges.reserve(n - 1);
  double last_height = 0.0;

  // Slots keep the smaller index on merge, so a slot index is also the
  // smallest leaf it contains and scanning (i, j) ascending breaks distance
  // ties by the lexicographically smallest cluster pair.
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t bi = 0, bj = 0;
    double best = kInf;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!active[j]) continue;
        if (w[i * n + j] < best) {
          best = w[i * n + j];
          bi = i;
          bj = j;
        }
      }
    }
    last_height = std::max(last_height, best);
    merges.push_back(Merge{node[bi], node[bj], last_height, size[bi] + size[bj]});
    for (std::size_t x = 0; x < n; ++x) {
      if (!active[x] || x == bi || x == bj) continue;
      const double a = w[bi * n + x];
      const double b = w[bj * n + x];
      double v = 0.0;
      switch (linkage) {
        case Linkage::single: v = std::min(a, b); break;
        case Linkage::complete: v = std::max(a, b); break;
        case Linkage::average:
          v = (static_cast<double>(size[bi]) * a + static_cast<double>(size[bj]) * b) /
              static_cast<double>(size[bi] + size[bj]);
          break;
      }
      w[bi * n + x] = v;
      w[x * n + bi] = v;
    }
    active[bj] = false;
    size[bi] += size[bj];
    node[bi] = n + step;
  }
  return Dendrogram(n, std::move(merges));
}

Membership cut_dendrogram(const Dendrogram& tree, std::size_t k) {
  const std::size_t n = tree.leaf_count();
  if (k == 0 || k > n) throw Error("cut requires 1 <= k <= n (k = " + std::to_string(k) + ", n = " + std::to_string(n) + ")");
  std::vector<std::size_t> parent(2 * n - 1);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t t = 0; t < n - k; ++t) {
    const Merge& m = tree.merges()[t];
    parent[find(m.left)] = n + t;
    parent[find(m.right)] = n + t;
  }
  constexpr std::size_t unset = std::numeric_limits<std::size_t>::max();
  std::map<std::size_t, std::size_t> label_of_root;
  std::vector<std::size_t> labels(n, unset);
  for (std::size_t leaf : tree.leaf_order()) {
    const std::size_t root = find(leaf);
    auto [it, inserted] = label_of_root.emplace(root, label_of_root.size());
    labels[leaf] = it->second;
  }
  return Membership(std::move(labels), k);
}

// Membership files ------------------------------------------------------------------------

Membership parse_membership_csv(std::string_view text) {
  auto records = parse_csv_records(text);
  if (!records.empty() && records.front().size() == 2 && records.front()[0] == "object_name" &&
      records.front()[1] == "cluster_label") {
    records.erase(records.begin());
  }
  if (records.empty()) throw Error("membership CSV has no rows");
  std::map<std::string, std::size_t> ids;
  std::vector<std::string> names;
  std::vector<std::size_t> labels;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].size() != 2)
      throw Error("membership row " + std::to_string(i + 1) + ": expected 2 fields, got " + std::to_string(records[i].size()));
    const auto [it, inserted] = ids.emplace(records[i][1], names.size());
    if (inserted) names.push_back(records[i][1]);
    labels.push_back(it->second);
  }
  const std::size_t k = names.size();
  return Membership(std::move(labels), k, std::nullopt, std::move(names));
}

Membership load_membership(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_membership_csv(text);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

std::string membership_to_csv(const Membership& mem, const std::vector<std::string>& object_names) {
  if (object_names.size() != mem.size()) throw Error("object name count does not match membership size");
  std::ostringstream out;
  out << "object_name,cluster_label\n";
  for (std::size_t i = 0; i < mem.size(); ++i)
    out << csv_escape(object_names[i]) << ',' << csv_escape(mem.display_name(mem[i])) << '\n';
  return out.str();
}

}  // namespace supergrid
