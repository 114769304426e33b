#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "elicit/kernels.hpp"

using namespace elicit;

namespace {

std::vector<Code> random_codes(std::size_t n, std::mt19937& gen, int max_code) {
  std::uniform_int_distribution<int> dist(0, max_code);
  std::vector<Code> v(n);
  for (auto& c : v) c = dist(gen);
  return v;
}

}  // namespace

TEST(Kernels, ScalarMatchesHandComputation) {
  const std::vector<Code> q{0, 1, 2};
  const std::vector<Code> rows{0, 1, 2, 3, 1, 0, 0, 0, 0};
  std::vector<double> out(3);
  kernels::squared_distances_scalar(q, rows, out);
  EXPECT_EQ(out, (std::vector<double>{0.0, 13.0, 5.0}));
}

#if defined(__x86_64__) || defined(_M_X64)
TEST(Kernels, Avx2MatchesScalarBitForBit) {
  if (kernels::detect_isa() != kernels::Isa::Avx2) GTEST_SKIP() << "AVX2 not available";
  std::mt19937 gen(12345);
  for (std::size_t p : {1u, 3u, 4u, 7u, 8u, 9u, 16u, 27u, 33u, 100u}) {
    for (std::size_t n : {1u, 2u, 5u, 41u, 64u}) {
      const auto q = random_codes(p, gen, 9);
      const auto rows = random_codes(p * n, gen, 9);
      std::vector<double> a(n), b(n);
      kernels::squared_distances_scalar(q, rows, a);
      kernels::squared_distances_avx2(q, rows, b);
      EXPECT_EQ(a, b) << "p=" << p << " n=" << n;
    }
  }
}
#endif

TEST(Kernels, DispatchAgreesWithScalar) {
  std::mt19937 gen(7);
  const auto q = random_codes(27, gen, 3);
  const auto rows = random_codes(27 * 50, gen, 3);
  std::vector<double> a(50), b(50);
  kernels::squared_distances_scalar(q, rows, a);
  kernels::squared_distances(q, rows, b);
  EXPECT_EQ(a, b);
}
