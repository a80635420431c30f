// AArch64 only. Two float64x2 accumulators model lanes {0,1} and {2,3}.
#include <arm_neon.h>

#include <cstddef>

namespace supergrid::kernels::neon {

namespace {

// (l0 + l2) + (l1 + l3)
inline double reduce(float64x2_t lanes01, float64x2_t lanes23) {
  const float64x2_t pair = vaddq_f64(lanes01, lanes23);
  return vgetq_lane_f64(pair, 0) + vgetq_lane_f64(pair, 1);
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  const std::size_t n4 = n & ~std::size_t{3};
  float64x2_t acc01 = vdupq_n_f64(0.0);
  float64x2_t acc23 = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n4; i += 4) {
    acc01 = vaddq_f64(acc01, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    acc23 = vaddq_f64(acc23, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  double s = reduce(acc01, acc23);
  for (std::size_t i = n4; i < n; ++i) s += a[i] * b[i];
  return s;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
  const std::size_t n4 = n & ~std::size_t{3};
  float64x2_t acc01 = vdupq_n_f64(0.0);
  float64x2_t acc23 = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n4; i += 4) {
    const float64x2_t d01 = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    const float64x2_t d23 = vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    acc01 = vaddq_f64(acc01, vmulq_f64(d01, d01));
    acc23 = vaddq_f64(acc23, vmulq_f64(d23, d23));
  }
  double s = reduce(acc01, acc23);
  for (std::size_t i = n4; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double sum(const double* a, std::size_t n) {
  const std::size_t n4 = n & ~std::size_t{3};
  float64x2_t acc01 = vdupq_n_f64(0.0);
  float64x2_t acc23 = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n4; i += 4) {
    acc01 = vaddq_f64(acc01, vld1q_f64(a + i));
    acc23 = vaddq_f64(acc23, vld1q_f64(a + i + 2));
  }
  double s = reduce(acc01, acc23);
  for (std::size_t i = n4; i < n; ++i) s += a[i];
  return s;
}

void accumulate(double* dst, const double* src, std::size_t n) {
  const std::size_t n2 = n & ~std::size_t{1};
  for (std::size_t i = 0; i < n2; i += 2) vst1q_f64(dst + i, vaddq_f64(vld1q_f64(dst + i), vld1q_f64(src + i)));
  for (std::size_t i = n2; i < n; ++i) dst[i] += src[i];
}

}  // namespace supergrid::kernels::neon
