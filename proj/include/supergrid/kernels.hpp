#pragma once

// Data-parallel arithmetic kernels behind the clustering code.
//
// Every reduction uses one fixed evaluation order: four interleaved partial
// sums (lane j takes elements i with i % 4 == j over the largest multiple of
// four), combined as (lane0 + lane2) + (lane1 + lane3), then the tail added
// left to right. The SIMD variants perform exactly these IEEE operations
// without fused multiply-add, so every variant returns bit-identical results
// to the scalar reference.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace supergrid::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
  // dst[i] += src[i]
  void (*accumulate)(double* dst, const double* src, std::size_t n);
};

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
void accumulate(double* dst, const double* src, std::size_t n);
}  // namespace scalar

/// True when the variant was compiled in and the running CPU supports it.
bool isa_available(Isa isa);
std::vector<Isa> available_isas();

/// Table for a specific variant; throws supergrid::Error if unavailable.
const KernelTable& table_for(Isa isa);

/// The best available variant, detected once. SUPERGRID_ISA=scalar|avx2|neon
/// in the environment overrides the choice when that variant is available.
const KernelTable& active();

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}
inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  return active().squared_distance(a.data(), b.data(), a.size());
}
inline double sum(std::span<const double> a) { return active().sum(a.data(), a.size()); }
inline void accumulate(std::span<double> dst, std::span<const double> src) {
  active().accumulate(dst.data(), src.data(), dst.size());
}

}  // namespace supergrid::kernels
