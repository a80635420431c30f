#include "supergrid/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "supergrid/error.hpp"
#include "supergrid/random.hpp"

namespace supergrid {

SilhouetteReport silhouette(const DistanceMatrix& d, const Membership& mem) {
  const std::size_t n = d.size();
  if (mem.size() != n) {
    throw Error("silhouette: membership covers " + std::to_string(mem.size()) +
                " objects, distance matrix " + std::to_string(n));
  }
  const std::size_t k = mem.k();
  if (k < 2) throw Error("silhouette requires at least two clusters");
  const auto sizes = mem.cluster_sizes();

  SilhouetteReport out;
  out.a.resize(n);
  out.b.resize(n);
  out.sil.resize(n);
  std::vector<double> sums(k);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(sums.begin(), sums.end(), 0.0);
    const double* row = d.row(i);
    for (std::size_t j = 0; j < n; ++j) sums[mem[j]] += row[j];
    const std::size_t own = mem[i];
    const double a = sums[own] / static_cast<double>(sizes[own]);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c)
      if (c != own) b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
    out.a[i] = a;
    out.b[i] = b;
    out.sil[i] = b - a;
  }
  out.cluster_mean.assign(k, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.cluster_mean[mem[i]] += out.sil[i];
    total += out.sil[i];
  }
  for (std::size_t c = 0; c < k; ++c) out.cluster_mean[c] /= static_cast<double>(sizes[c]);
  out.mean = total / static_cast<double>(n);
  return out;
}

double jaccard_labels(std::span<const std::size_t> a, std::span<const std::size_t> b,
                      std::span<const std::size_t> shared) {
  if (shared.size() < 2) throw Error("jaccard requires at least two shared objects");
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  cells.reserve(shared.size());
  for (std::size_t idx : shared) {
    if (idx >= a.size() || idx >= b.size()) throw Error("jaccard: shared index outside a membership");
    cells.emplace_back(a[idx], b[idx]);
  }
  auto pairs_in_runs = [](std::vector<std::size_t> keys) {
    std::sort(keys.begin(), keys.end());
    std::uint64_t pairs = 0;
    for (std::size_t i = 0; i < keys.size();) {
      std::size_t j = i;
      while (j < keys.size() && keys[j] == keys[i]) ++j;
      const std::uint64_t run = j - i;
      pairs += run * (run - 1) / 2;
      i = j;
    }
    return pairs;
  };
  std::vector<std::size_t> ka, kb;
  for (const auto& [x, y] : cells) {
    ka.push_back(x);
    kb.push_back(y);
  }
  const std::uint64_t pa = pairs_in_runs(std::move(ka));
  const std::uint64_t pb = pairs_in_runs(std::move(kb));
  std::sort(cells.begin(), cells.end());
  std::uint64_t both = 0;
  for (std::size_t i = 0; i < cells.size();) {
    std::size_t j = i;
    while (j < cells.size() && cells[j] == cells[i]) ++j;
    const std::uint64_t run = j - i;
    both += run * (run - 1) / 2;
    i = j;
  }
  const std::uint64_t uni = pa + pb - both;
  if (uni == 0) return 1.0;
  return static_cast<double>(both) / static_cast<double>(uni);
}

double jaccard(const Membership& a, const Membership& b, std::span<const std::size_t> shared) {
  return jaccard_labels(a.labels(), b.labels(), shared);
}

namespace {

// Labels a subsample (given as sorted object indices) with k clusters.
using SubsampleClusterer =
    std::function<std::vector<std::size_t>(const std::vector<std::size_t>& objects, std::size_t k, std::uint64_t seed)>;

void validate(const StabilityOptions& o, std::size_t n) {
  if (!(o.fraction > 0.0 && o.fraction <= 1.0)) throw Error("subsample fraction must lie in (0, 1]");
  if (o.subsamples < 2) throw Error("stability needs at least two subsamples");
  if (o.k_min > o.k_max) throw Error("k range is empty");
  const auto k_cap = static_cast<std::size_t>(std::floor(o.fraction * static_cast<double>(n)));
  if (o.k_min < 2 || o.k_max > k_cap) {
    throw Error("k range must lie within [2, " + std::to_string(k_cap) + "] for n = " + std::to_string(n) +
                " and fraction " + std::to_string(o.fraction));
  }
}

std::vector<StabilityReport> run_curve(std::size_t n, const DistanceMatrix& dist, const StabilityOptions& o,
                                       const SubsampleClusterer& cluster) {
  validate(o, n);
  const auto size = static_cast<std::size_t>(std::ceil(o.fraction * static_cast<double>(n)));
  std::vector<std::vector<std::size_t>> samples(o.subsamples);
  for (std::size_t s = 0; s < o.subsamples; ++s) {
    Rng rng(derive_seed(o.seed, s));
    samples[s] = rng.sample_without_replacement(n, std::min(size, n));
    std::sort(samples[s].begin(), samples[s].end());
  }
  std::vector<std::vector<std::size_t>> shared(o.subsamples * o.subsamples);
  for (std::size_t s = 0; s < o.subsamples; ++s) {
    for (std::size_t t = s + 1; t < o.subsamples; ++t) {
      auto& out = shared[s * o.subsamples + t];
      std::set_intersection(samples[s].begin(), samples[s].end(), samples[t].begin(), samples[t].end(),
                            std::back_inserter(out));
    }
  }

  constexpr std::size_t absent = std::numeric_limits<std::size_t>::max();
  std::vector<StabilityReport> reports;
  for (std::size_t k = o.k_min; k <= o.k_max; ++k) {
    std::vector<std::vector<std::size_t>> full(o.subsamples, std::vector<std::size_t>(n, absent));
    double sil_total = 0.0;
    for (std::size_t s = 0; s < o.subsamples; ++s) {
      const auto labels = cluster(samples[s], k, derive_seed(derive_seed(o.seed, s), k));
      for (std::size_t i = 0; i < samples[s].size(); ++i) full[s][samples[s][i]] = labels[i];
      const Membership mem = Membership::from_labels(labels);
      sil_total += silhouette(dist.subset(samples[s]), mem).mean;
    }
    double j_total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t s = 0; s < o.subsamples; ++s) {
      for (std::size_t t = s + 1; t < o.subsamples; ++t) {
        j_total += jaccard_labels(full[s], full[t], shared[s * o.subsamples + t]);
        ++pairs;
      }
    }
    reports.push_back(StabilityReport{k, o.subsamples, o.fraction, j_total / static_cast<double>(pairs),
                                      sil_total / static_cast<double>(o.subsamples)});
  }
  return reports;
}

LabeledMatrix row_subset(const LabeledMatrix& m, const std::vector<std::size_t>& rows) {
  std::vector<double> values;
  values.reserve(rows.size() * m.cols());
  for (std::size_t r : rows) {
    const auto row = m.row(r);
    values.insert(values.end(), row.begin(), row.end());
  }
  return LabeledMatrix::dense(rows.size(), m.cols(), std::move(values));
}

}  // namespace

std::vector<StabilityReport> stability_curve(const LabeledMatrix& m, const StabilityOptions& options) {
  const DistanceMatrix dist = cosine_distance_matrix(cosine_similarity(m));
  if (options.method == StabilityMethod::pam) return stability_curve(dist, options);
  const std::size_t restarts = options.kmeans_restarts;
  return run_curve(m.rows(), dist, options,
                   [&](const std::vector<std::size_t>& objects, std::size_t k, std::uint64_t seed) {
                     KMeansOptions ko;
                     ko.seed = seed;
                     ko.restarts = restarts;
                     return kmeans(row_subset(m, objects), k, ko).labels();
                   });
}

std::vector<StabilityReport> stability_curve(const DistanceMatrix& d, const StabilityOptions& options) {
  if (options.method != StabilityMethod::pam) throw Error("a precomputed distance matrix supports PAM only");
  return run_curve(d.size(), d, options,
                   [&](const std::vector<std::size_t>& objects, std::size_t k, std::uint64_t seed) {
                     return pam(d.subset(objects), k, seed).labels();
                   });
}

}  // namespace supergrid
