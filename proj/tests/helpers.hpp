#pragma once

#include <string>
#include <vector>

#include "oracles.hpp"
#include "supergrid/clustering.hpp"
#include "supergrid/random.hpp"

namespace testing {

// Message of the supergrid::Error thrown by f, or "" when nothing is thrown.
template <typename F>
std::string error_message(F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

inline bool contains(const std::string& text, const std::string& part) { return text.find(part) != std::string::npos; }

inline supergrid::DistanceMatrix to_matrix(const oracle::Dist& d) {
  std::vector<double> flat;
  for (const auto& row : d) flat.insert(flat.end(), row.begin(), row.end());
  return supergrid::DistanceMatrix(d.size(), std::move(flat));
}

// Symmetric matrix with zero diagonal and entries uniform in (0, 1].
inline oracle::Dist random_dissimilarity(std::size_t n, supergrid::Rng& rng) {
  oracle::Dist d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = 1.0 - rng.uniform();
  return d;
}

// Cosine distances between random vectors.
inline oracle::Dist random_cosine(std::size_t n, std::size_t dims, supergrid::Rng& rng) {
  std::vector<std::vector<double>> v(n, std::vector<double>(dims));
  for (auto& row : v)
    for (auto& x : row) x = rng.normal();
  oracle::Dist d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double dot = 0.0, ni = 0.0, nj = 0.0;
      for (std::size_t k = 0; k < dims; ++k) {
        dot += v[i][k] * v[j][k];
        ni += v[i][k] * v[i][k];
        nj += v[j][k] * v[j][k];
      }
      const double s = std::clamp(dot / std::sqrt(ni * nj), -1.0, 1.0);
      d[i][j] = std::acos(s) / 3.14159265358979323846;
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d[j][i] = d[i][j];
  return d;
}

// Labels in [0, k) with every cluster non-empty.
inline std::vector<std::size_t> random_labels(std::size_t n, std::size_t k, supergrid::Rng& rng) {
  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = i < k ? i : static_cast<std::size_t>(rng.below(k));
  for (std::size_t i = n; i > 1; --i) std::swap(labels[i - 1], labels[static_cast<std::size_t>(rng.below(i))]);
  return labels;
}

}  // namespace testing
