// Compiled with -mavx2 only (no -mfma): products and sums round exactly like
// the scalar reference.

#include <immintrin.h>

#include <cmath>

#include "moclab/simd/kernels.hpp"

namespace moclab::simd {
namespace {

constexpr std::size_t kLanes = 4;

inline double hmax(__m256d v) {
  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, v);
  double m = lanes[0];
  for (std::size_t i = 1; i < kLanes; ++i) m = lanes[i] > m ? lanes[i] : m;
  return m;
}

inline double hmin(__m256d v) {
  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, v);
  double m = lanes[0];
  for (std::size_t i = 1; i < kLanes; ++i) m = lanes[i] < m ? lanes[i] : m;
  return m;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d best = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d d = _mm256_andnot_pd(sign, _mm256_sub_pd(_mm256_loadu_pd(a + i),
                                                           _mm256_loadu_pd(b + i)));
    best = _mm256_max_pd(d, best);
  }
  double m = hmax(best);
  for (; i < n; ++i) {
    const double d = std::fabs(a[i] - b[i]);
    m = d > m ? d : m;
  }
  return m;
}

void min_max(const double* a, std::size_t n, double* lo, double* hi) {
  if (n < kLanes) {
    double l = a[0];
    double h = a[0];
    for (std::size_t i = 1; i < n; ++i) {
      l = a[i] < l ? a[i] : l;
      h = a[i] > h ? a[i] : h;
    }
    *lo = l;
    *hi = h;
    return;
  }
  __m256d vl = _mm256_loadu_pd(a);
  __m256d vh = vl;
  std::size_t i = kLanes;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d x = _mm256_loadu_pd(a + i);
    vl = _mm256_min_pd(x, vl);
    vh = _mm256_max_pd(x, vh);
  }
  double l = hmin(vl);
  double h = hmax(vh);
  for (; i < n; ++i) {
    l = a[i] < l ? a[i] : l;
    h = a[i] > h ? a[i] : h;
  }
  *lo = l;
  *hi = h;
}

void axpy(double* y, const double* x, double alpha, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d r = _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void second_difference(const double* lo, const double* mid, const double* hi, double scale,
                       double* out, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d m = _mm256_loadu_pd(mid + i);
    const __m256d up = _mm256_sub_pd(_mm256_loadu_pd(hi + i), m);
    const __m256d down = _mm256_sub_pd(m, _mm256_loadu_pd(lo + i));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_sub_pd(up, down), vs));
  }
  for (; i < n; ++i) out[i] = ((hi[i] - mid[i]) - (mid[i] - lo[i])) * scale;
}

void first_difference(const double* lo, const double* hi, double scale, double* out,
                      std::size_t n) {
  const __m256d vs = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(hi + i), _mm256_loadu_pd(lo + i));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(d, vs));
  }
  for (; i < n; ++i) out[i] = (hi[i] - lo[i]) * scale;
}

void affine(double a, double b, const double* x, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i, _mm256_add_pd(va, _mm256_mul_pd(vb, _mm256_loadu_pd(x + i))));
  }
  for (; i < n; ++i) out[i] = a + b * x[i];
}

void combine(const double* p, const double* x, const double* q, const double* y,
             const double* r, const double* z, const double* c, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d px = _mm256_mul_pd(_mm256_loadu_pd(p + i), _mm256_loadu_pd(x + i));
    const __m256d qy = _mm256_mul_pd(_mm256_loadu_pd(q + i), _mm256_loadu_pd(y + i));
    const __m256d rz = _mm256_mul_pd(_mm256_loadu_pd(r + i), _mm256_loadu_pd(z + i));
    const __m256d s = _mm256_add_pd(_mm256_add_pd(_mm256_add_pd(px, qy), rz), _mm256_loadu_pd(c + i));
    _mm256_storeu_pd(out + i, s);
  }
  for (; i < n; ++i) out[i] = ((p[i] * x[i] + q[i] * y[i]) + r[i] * z[i]) + c[i];
}

constexpr KernelTable kAvx2{
    Isa::Avx2, &max_abs_diff, &min_max, &axpy, &second_difference, &first_difference,
    &affine,   &combine,
};

}  // namespace

const KernelTable& avx2_table() { return kAvx2; }

}  // namespace moclab::simd
