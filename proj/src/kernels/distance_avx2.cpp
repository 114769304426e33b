#include "elicit/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace elicit::kernels {

// Four lanes of int32 -> double per step; differences of small integer codes
// are exact in double, so lane order does not change the sum.
__attribute__((target("avx2,fma"))) void squared_distances_avx2(
    std::span<const Code> query, std::span<const Code> rows, std::span<double> out) {
  const std::size_t p = query.size();
  const std::size_t body = p & ~std::size_t{3};
  for (std::size_t r = 0; r < out.size(); ++r) {
    const Code* row = rows.data() + r * p;
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j < body; j += 4) {
      const __m128i a = _mm_loadu_si128(reinterpret_cast<const __m128i*>(row + j));
      const __m128i b = _mm_loadu_si128(reinterpret_cast<const __m128i*>(query.data() + j));
      const __m256d diff = _mm256_sub_pd(_mm256_cvtepi32_pd(a), _mm256_cvtepi32_pd(b));
      acc = _mm256_fmadd_pd(diff, diff, acc);
    }
    const __m128d lo = _mm256_castpd256_pd128(acc);
    const __m128d hi = _mm256_extractf128_pd(acc, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    double sum = _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
    for (; j < p; ++j) {
      const double diff = static_cast<double>(row[j]) - static_cast<double>(query[j]);
      sum += diff * diff;
    }
    out[r] = sum;
  }
}

}  // namespace elicit::kernels

#endif
