#include <cstdlib>
#include <string>

#include "supergrid/error.hpp"
#include "supergrid/kernels.hpp"

namespace supergrid::kernels {

#if defined(SUPERGRID_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
void accumulate(double* dst, const double* src, std::size_t n);
}  // namespace avx2
#endif

#if defined(SUPERGRID_HAVE_NEON)
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
void accumulate(double* dst, const double* src, std::size_t n);
}  // namespace neon
#endif

namespace {

constexpr KernelTable kScalar{Isa::scalar, &scalar::dot, &scalar::squared_distance, &scalar::sum,
                              &scalar::accumulate};
#if defined(SUPERGRID_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::avx2, &avx2::dot, &avx2::squared_distance, &avx2::sum,
                            &avx2::accumulate};
#endif
#if defined(SUPERGRID_HAVE_NEON)
constexpr KernelTable kNeon{Isa::neon, &neon::dot, &neon::squared_distance, &neon::sum,
                            &neon::accumulate};
#endif

const KernelTable& detect() {
  if (const char* forced = std::getenv("SUPERGRID_ISA")) {
    const std::string name(forced);
    for (Isa isa : available_isas())
      if (to_string(isa) == name) return table_for(isa);
  }
#if defined(SUPERGRID_HAVE_NEON)
  return kNeon;
#else
  if (isa_available(Isa::avx2)) return table_for(Isa::avx2);
  return kScalar;
#endif
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "scalar";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(SUPERGRID_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(SUPERGRID_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon})
    if (isa_available(isa)) out.push_back(isa);
  return out;
}

const KernelTable& table_for(Isa isa) {
  if (!isa_available(isa)) throw Error("kernel variant '" + std::string(to_string(isa)) + "' is not available");
  switch (isa) {
#if defined(SUPERGRID_HAVE_AVX2)
    case Isa::avx2: return kAvx2;
#endif
#if defined(SUPERGRID_HAVE_NEON)
    case Isa::neon: return kNeon;
#endif
    default: return kScalar;
  }
}

const KernelTable& active() {
  static const KernelTable& table = detect();
  return table;
}

}  // namespace supergrid::kernels
