#include "udrs/kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace udrs::kernels {

#if defined(__AVX2__)

std::size_t count_within_avx2(const double* xs, const double* ys, std::size_t n, double qx,
                              double qy, double r2) {
  const __m256d vx = _mm256_set1_pd(qx);
  const __m256d vy = _mm256_set1_pd(qy);
  const __m256d vr = _mm256_set1_pd(r2);
  std::size_t c = 0;
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d dx0 = _mm256_sub_pd(_mm256_loadu_pd(xs + i), vx);
    __m256d dy0 = _mm256_sub_pd(_mm256_loadu_pd(ys + i), vy);
    __m256d dx1 = _mm256_sub_pd(_mm256_loadu_pd(xs + i + 4), vx);
    __m256d dy1 = _mm256_sub_pd(_mm256_loadu_pd(ys + i + 4), vy);
    // separate mul and add: results must match the scalar path bit for bit
    __m256d d0 = _mm256_add_pd(_mm256_mul_pd(dx0, dx0), _mm256_mul_pd(dy0, dy0));
    __m256d d1 = _mm256_add_pd(_mm256_mul_pd(dx1, dx1), _mm256_mul_pd(dy1, dy1));
    int m0 = _mm256_movemask_pd(_mm256_cmp_pd(d0, vr, _CMP_LE_OQ));
    int m1 = _mm256_movemask_pd(_mm256_cmp_pd(d1, vr, _CMP_LE_OQ));
    c += static_cast<std::size_t>(__builtin_popcount(m0) + __builtin_popcount(m1));
  }
  for (; i + 4 <= n; i += 4) {
    __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), vx);
    __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), vy);
    __m256d d = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    c += static_cast<std::size_t>(
        __builtin_popcount(_mm256_movemask_pd(_mm256_cmp_pd(d, vr, _CMP_LE_OQ))));
  }
  return c + count_within_scalar(xs + i, ys + i, n - i, qx, qy, r2);
}

#else

std::size_t count_within_avx2(const double* xs, const double* ys, std::size_t n, double qx,
                              double qy, double r2) {
  return count_within_scalar(xs, ys, n, qx, qy, r2);
}

#endif

}  // namespace udrs::kernels
