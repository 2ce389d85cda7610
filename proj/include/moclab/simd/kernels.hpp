#pragma once

// Data-parallel inner loops used by the solver and the modulus extractor.
//
// Every kernel has a scalar reference implementation; vector variants
// (AVX2 on x86-64, NEON on aarch64) perform the same operations in the same
// order without FMA contraction, so all variants agree bit for bit.
// kernels() picks the widest variant the running CPU supports; the
// MOCLAB_SIMD environment variable (scalar | avx2 | neon) overrides it.

#include <cstddef>
#include <string_view>

namespace moclab::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;

  /// max_i |a[i] - b[i]|, 0 for n == 0.
  double (*max_abs_diff)(const double* a, const double* b, std::size_t n);

  /// Smallest and largest entry; n must be positive.
  void (*min_max)(const double* a, std::size_t n, double* lo, double* hi);

  /// y[i] += alpha * x[i]
  void (*axpy)(double* y, const double* x, double alpha, std::size_t n);

  /// out[i] = ((hi[i] - mid[i]) - (mid[i] - lo[i])) * scale
  void (*second_difference)(const double* lo, const double* mid, const double* hi,
                            double scale, double* out, std::size_t n);

  /// out[i] = (hi[i] - lo[i]) * scale
  void (*first_difference)(const double* lo, const double* hi, double scale, double* out,
                           std::size_t n);

  /// out[i] = a + b * x[i]
  void (*affine)(double a, double b, const double* x, double* out, std::size_t n);

  /// out[i] = ((p[i]*x[i] + q[i]*y[i]) + r[i]*z[i]) + c[i]
  void (*combine)(const double* p, const double* x, const double* q, const double* y,
                  const double* r, const double* z, const double* c, double* out,
                  std::size_t n);
};

const KernelTable& scalar_kernels();

/// Null when the variant was not compiled in or the CPU lacks the extension.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

/// Runtime-selected table (cached after the first call).
const KernelTable& kernels();

}  // namespace moclab::simd
