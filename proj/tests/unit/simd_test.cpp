#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "moclab/simd/kernels.hpp"

namespace {

using moclab::simd::KernelTable;

std::vector<const KernelTable*> vector_tables() {
  std::vector<const KernelTable*> out;
  if (auto* t = moclab::simd::avx2_kernels()) out.push_back(t);
  if (auto* t = moclab::simd::neon_kernels()) out.push_back(t);
  return out;
}

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  // Wide exponent range so rounding differences would show up.
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-30, 30);
  std::vector<double> v(n);
  for (auto& x : v) x = std::ldexp(mant(rng), expo(rng));
  return v;
}

void expect_bitwise(const std::vector<double>& a, const std::vector<double>& b) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(std::bit_cast<std::uint64_t>(a[i]), std::bit_cast<std::uint64_t>(b[i])) << "index " << i;
  }
}

class SimdEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    tables_ = vector_tables();
    if (tables_.empty()) GTEST_SKIP() << "no vector kernels on this CPU";
  }
  std::vector<const KernelTable*> tables_;
  const KernelTable& ref_ = moclab::simd::scalar_kernels();
};

// Lengths straddle the vector width so every tail path runs.
const std::size_t kLengths[] = {1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 257};

TEST_F(SimdEquivalence, MaxAbsDiff) {
  std::mt19937_64 rng(1);
  for (auto* t : tables_) {
    for (std::size_t n : kLengths) {
      const auto a = random_vector(rng, n);
      const auto b = random_vector(rng, n);
      EXPECT_EQ(ref_.max_abs_diff(a.data(), b.data(), n), t->max_abs_diff(a.data(), b.data(), n)) << n;
    }
    EXPECT_EQ(t->max_abs_diff(nullptr, nullptr, 0), 0.0);
  }
}

TEST_F(SimdEquivalence, MinMax) {
  std::mt19937_64 rng(2);
  for (auto* t : tables_) {
    for (std::size_t n : kLengths) {
      const auto a = random_vector(rng, n);
      double lo0, hi0, lo1, hi1;
      ref_.min_max(a.data(), n, &lo0, &hi0);
      t->min_max(a.data(), n, &lo1, &hi1);
      EXPECT_EQ(lo0, lo1);
      EXPECT_EQ(hi0, hi1);
    }
  }
}

TEST_F(SimdEquivalence, Axpy) {
  std::mt19937_64 rng(3);
  for (auto* t : tables_) {
    for (std::size_t n : kLengths) {
      const auto x = random_vector(rng, n);
      auto y0 = random_vector(rng, n);
      auto y1 = y0;
      ref_.axpy(y0.data(), x.data(), 0.3712, n);
      t->axpy(y1.data(), x.data(), 0.3712, n);
      expect_bitwise(y0, y1);
    }
  }
}

TEST_F(SimdEquivalence, Differences) {
  std::mt19937_64 rng(4);
  for (auto* t : tables_) {
    for (std::size_t n : kLengths) {
      const auto lo = random_vector(rng, n);
      const auto mid = random_vector(rng, n);
      const auto hi = random_vector(rng, n);
      std::vector<double> o0(n), o1(n);
      ref_.second_difference(lo.data(), mid.data(), hi.data(), 1.0 / 3.0, o0.data(), n);
      t->second_difference(lo.data(), mid.data(), hi.data(), 1.0 / 3.0, o1.data(), n);
      expect_bitwise(o0, o1);
      ref_.first_difference(lo.data(), hi.data(), 7.25, o0.data(), n);
      t->first_difference(lo.data(), hi.data(), 7.25, o1.data(), n);
      expect_bitwise(o0, o1);
    }
  }
}

TEST_F(SimdEquivalence, AffineAndCombine) {
  std::mt19937_64 rng(5);
  for (auto* t : tables_) {
    for (std::size_t n : kLengths) {
      std::vector<std::vector<double>> in;
      for (int k = 0; k < 7; ++k) in.push_back(random_vector(rng, n));
      std::vector<double> o0(n), o1(n);
      ref_.affine(0.1, -2.5, in[0].data(), o0.data(), n);
      t->affine(0.1, -2.5, in[0].data(), o1.data(), n);
      expect_bitwise(o0, o1);
      ref_.combine(in[0].data(), in[1].data(), in[2].data(), in[3].data(), in[4].data(), in[5].data(),
                   in[6].data(), o0.data(), n);
      t->combine(in[0].data(), in[1].data(), in[2].data(), in[3].data(), in[4].data(), in[5].data(),
                 in[6].data(), o1.data(), n);
      expect_bitwise(o0, o1);
    }
  }
}

TEST(SimdDispatch, SelectedTableIsComplete) {
  const KernelTable& k = moclab::simd::kernels();
  EXPECT_NE(k.max_abs_diff, nullptr);
  EXPECT_NE(k.combine, nullptr);
  EXPECT_FALSE(moclab::simd::isa_name(k.isa).empty());
}

TEST(SimdScalar, ReferenceValues) {
  const auto& k = moclab::simd::scalar_kernels();
  const double a[] = {1.0, -2.0, 3.5};
  const double b[] = {0.5, 1.0, 3.5};
  EXPECT_EQ(k.max_abs_diff(a, b, 3), 3.0);
  double lo, hi;
  k.min_max(a, 3, &lo, &hi);
  EXPECT_EQ(lo, -2.0);
  EXPECT_EQ(hi, 3.5);
  double out[3];
  k.second_difference(a, b, a, 2.0, out, 3);  // (a - b) - (b - a) = 2(a - b)
  EXPECT_EQ(out[0], 2.0);
  EXPECT_EQ(out[1], -12.0);
  EXPECT_EQ(out[2], 0.0);
}

}  // namespace
