// aarch64 baseline NEON. vfmaq is deliberately avoided so results match the
// scalar reference.

#include <arm_neon.h>

#include <cmath>

#include "moclab/simd/kernels.hpp"

namespace moclab::simd {
namespace {

constexpr std::size_t kLanes = 2;

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  float64x2_t best = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const float64x2_t d = vabsq_f64(vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    best = vbslq_f64(vcgtq_f64(d, best), d, best);
  }
  double m = vgetq_lane_f64(best, 0);
  const double m1 = vgetq_lane_f64(best, 1);
  m = m1 > m ? m1 : m;
  for (; i < n; ++i) {
    const double d = std::fabs(a[i] - b[i]);
    m = d > m ? d : m;
  }
  return m;
}

void min_max(const double* a, std::size_t n, double* lo, double* hi) {
  double l = a[0];
  double h = a[0];
  std::size_t i = 1;
  if (n >= kLanes) {
    float64x2_t vl = vld1q_f64(a);
    float64x2_t vh = vl;
    for (i = kLanes; i + kLanes <= n; i += kLanes) {
      const float64x2_t x = vld1q_f64(a + i);
      vl = vbslq_f64(vcltq_f64(x, vl), x, vl);
      vh = vbslq_f64(vcgtq_f64(x, vh), x, vh);
    }
    l = vgetq_lane_f64(vl, 0);
    h = vgetq_lane_f64(vh, 0);
    const double l1 = vgetq_lane_f64(vl, 1);
    const double h1 = vgetq_lane_f64(vh, 1);
    l = l1 < l ? l1 : l;
    h = h1 > h ? h1 : h;
  }
  for (; i < n; ++i) {
    l = a[i] < l ? a[i] : l;
    h = a[i] > h ? a[i] : h;
  }
  *lo = l;
  *hi = h;
}

void axpy(double* y, const double* x, double alpha, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  }
  for (; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void second_difference(const double* lo, const double* mid, const double* hi, double scale,
                       double* out, std::size_t n) {
  const float64x2_t vs = vdupq_n_f64(scale);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const float64x2_t m = vld1q_f64(mid + i);
    const float64x2_t up = vsubq_f64(vld1q_f64(hi + i), m);
    const float64x2_t down = vsubq_f64(m, vld1q_f64(lo + i));
    vst1q_f64(out + i, vmulq_f64(vsubq_f64(up, down), vs));
  }
  for (; i < n; ++i) out[i] = ((hi[i] - mid[i]) - (mid[i] - lo[i])) * scale;
}

void first_difference(const double* lo, const double* hi, double scale, double* out,
                      std::size_t n) {
  const float64x2_t vs = vdupq_n_f64(scale);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    vst1q_f64(out + i, vmulq_f64(vsubq_f64(vld1q_f64(hi + i), vld1q_f64(lo + i)), vs));
  }
  for (; i < n; ++i) out[i] = (hi[i] - lo[i]) * scale;
}

void affine(double a, double b, const double* x, double* out, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  const float64x2_t vb = vdupq_n_f64(b);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    vst1q_f64(out + i, vaddq_f64(va, vmulq_f64(vb, vld1q_f64(x + i))));
  }
  for (; i < n; ++i) out[i] = a + b * x[i];
}

void combine(const double* p, const double* x, const double* q, const double* y,
             const double* r, const double* z, const double* c, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const float64x2_t px = vmulq_f64(vld1q_f64(p + i), vld1q_f64(x + i));
    const float64x2_t qy = vmulq_f64(vld1q_f64(q + i), vld1q_f64(y + i));
    const float64x2_t rz = vmulq_f64(vld1q_f64(r + i), vld1q_f64(z + i));
    vst1q_f64(out + i, vaddq_f64(vaddq_f64(vaddq_f64(px, qy), rz), vld1q_f64(c + i)));
  }
  for (; i < n; ++i) out[i] = ((p[i] * x[i] + q[i] * y[i]) + r[i] * z[i]) + c[i];
}

constexpr KernelTable kNeon{
    Isa::Neon, &max_abs_diff, &min_max, &axpy, &second_difference, &first_difference,
    &affine,   &combine,
};

}  // namespace

const KernelTable& neon_table() { return kNeon; }

}  // namespace moclab::simd
