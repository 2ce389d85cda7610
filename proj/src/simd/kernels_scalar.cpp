#include "moclab/simd/kernels.hpp"

#include <cmath>

namespace moclab::simd {
namespace {

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::fabs(a[i] - b[i]);
    best = d > best ? d : best;
  }
  return best;
}

void min_max(const double* a, std::size_t n, double* lo, double* hi) {
  double l = a[0];
  double h = a[0];
  for (std::size_t i = 1; i < n; ++i) {
    l = a[i] < l ? a[i] : l;
    h = a[i] > h ? a[i] : h;
  }
  *lo = l;
  *hi = h;
}

void axpy(double* y, const double* x, double alpha, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void second_difference(const double* lo, const double* mid, const double* hi, double scale,
                       double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = ((hi[i] - mid[i]) - (mid[i] - lo[i])) * scale;
}

void first_difference(const double* lo, const double* hi, double scale, double* out,
                      std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (hi[i] - lo[i]) * scale;
}

void affine(double a, double b, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a + b * x[i];
}

void combine(const double* p, const double* x, const double* q, const double* y,
             const double* r, const double* z, const double* c, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = ((p[i] * x[i] + q[i] * y[i]) + r[i] * z[i]) + c[i];
  }
}

constexpr KernelTable kScalar{
    Isa::Scalar,    &max_abs_diff, &min_max, &axpy, &second_difference, &first_difference,
    &affine,        &combine,
};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace moclab::simd
