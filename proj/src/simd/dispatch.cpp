#include <cstdlib>
#include <string>

#include "moclab/simd/kernels.hpp"

namespace moclab::simd {

#if defined(MOCLAB_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(MOCLAB_HAVE_NEON)
const KernelTable& neon_table();
#endif

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
  }
  return "unknown";
}

const KernelTable* avx2_kernels() {
#if defined(MOCLAB_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2")) return &avx2_table();
#endif
  return nullptr;
}

const KernelTable* neon_kernels() {
#if defined(MOCLAB_HAVE_NEON)
  return &neon_table();
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& select() {
  const char* forced = std::getenv("MOCLAB_SIMD");
  const std::string want = forced ? forced : "";
  if (want == "scalar") return scalar_kernels();
  if (want.empty() || want == "avx2") {
    if (const KernelTable* t = avx2_kernels()) return *t;
  }
  if (want.empty() || want == "neon") {
    if (const KernelTable* t = neon_kernels()) return *t;
  }
  return scalar_kernels();
}

}  // namespace

const KernelTable& kernels() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace moclab::simd
