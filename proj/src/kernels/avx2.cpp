#include <cmath>

#include "mpbandit/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define MPBANDIT_HAVE_AVX2_KERNELS 1
#define MPBANDIT_AVX2 __attribute__((target("avx2")))
#endif

namespace mpbandit::kernels::avx2 {

#ifdef MPBANDIT_HAVE_AVX2_KERNELS

MPBANDIT_AVX2 std::size_t ucb_argmax(std::span<const double> means, std::span<const double> counts,
                                     double bonus_numerator) {
  const std::size_t n = means.size();
  const std::size_t n4 = n & ~std::size_t{3};
  const __m256d zero = _mm256_setzero_pd();

  for (std::size_t k = 0; k < n4; k += 4) {
    const int mask = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(&counts[k]), zero, _CMP_EQ_OQ));
    if (mask != 0) return k + static_cast<std::size_t>(__builtin_ctz(static_cast<unsigned>(mask)));
  }
  for (std::size_t k = n4; k < n; ++k) {
    if (counts[k] == 0.0) return k;
  }

  std::size_t best = 0;
  double best_score;
  std::size_t k = 0;
  if (n4 != 0) {
    const __m256d numer = _mm256_set1_pd(bonus_numerator);
    const __m256d step = _mm256_set1_pd(4.0);
    __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
    __m256d lane_best = _mm256_add_pd(_mm256_loadu_pd(&means[0]),
                                      _mm256_sqrt_pd(_mm256_div_pd(numer, _mm256_loadu_pd(&counts[0]))));
    __m256d lane_idx = idx;
    for (k = 4; k < n4; k += 4) {
      idx = _mm256_add_pd(idx, step);
      const __m256d score = _mm256_add_pd(
          _mm256_loadu_pd(&means[k]), _mm256_sqrt_pd(_mm256_div_pd(numer, _mm256_loadu_pd(&counts[k]))));
      // Strict >: each lane keeps its first maximum.
      const __m256d better = _mm256_cmp_pd(score, lane_best, _CMP_GT_OQ);
      lane_best = _mm256_blendv_pd(lane_best, score, better);
      lane_idx = _mm256_blendv_pd(lane_idx, idx, better);
    }
    alignas(32) double vals[4];
    alignas(32) double ids[4];
    _mm256_store_pd(vals, lane_best);
    _mm256_store_pd(ids, lane_idx);
    best_score = vals[0];
    best = static_cast<std::size_t>(ids[0]);
    for (int lane = 1; lane < 4; ++lane) {
      const auto id = static_cast<std::size_t>(ids[lane]);
      if (vals[lane] > best_score || (vals[lane] == best_score && id < best)) {
        best_score = vals[lane];
        best = id;
      }
    }
  } else {
    best_score = means[0] + std::sqrt(bonus_numerator / counts[0]);
    k = 1;
  }
  for (; k < n; ++k) {
    const double score = means[k] + std::sqrt(bonus_numerator / counts[k]);
    if (score > best_score) {
      best_score = score;
      best = k;
    }
  }
  return best;
}

MPBANDIT_AVX2 void column_mean_std(std::span<const double> matrix, std::size_t rows, std::size_t cols,
                                   std::span<double> mean, std::span<double> stddev) {
  const double n = static_cast<double>(rows);
  const std::size_t c4 = cols & ~std::size_t{3};
  const __m256d vn = _mm256_set1_pd(n);
  const __m256d vn1 = _mm256_set1_pd(n - 1.0);
  for (std::size_t c = 0; c < c4; c += 4) {
    __m256d sum = _mm256_setzero_pd();
    for (std::size_t r = 0; r < rows; ++r) sum = _mm256_add_pd(sum, _mm256_loadu_pd(&matrix[r * cols + c]));
    const __m256d m = _mm256_div_pd(sum, vn);
    __m256d ss = _mm256_setzero_pd();
    for (std::size_t r = 0; r < rows; ++r) {
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(&matrix[r * cols + c]), m);
      ss = _mm256_add_pd(ss, _mm256_mul_pd(d, d));
    }
    _mm256_storeu_pd(&mean[c], m);
    if (rows > 1) {
      _mm256_storeu_pd(&stddev[c], _mm256_sqrt_pd(_mm256_div_pd(ss, vn1)));
    } else {
      _mm256_storeu_pd(&stddev[c], _mm256_setzero_pd());
    }
  }
  if (c4 < cols) {
    // Tail columns through the reference path on the column sub-range.
    for (std::size_t c = c4; c < cols; ++c) {
      double sum = 0.0;
      for (std::size_t r = 0; r < rows; ++r) sum += matrix[r * cols + c];
      const double m = sum / n;
      double ss = 0.0;
      for (std::size_t r = 0; r < rows; ++r) {
        const double d = matrix[r * cols + c] - m;
        ss += d * d;
      }
      mean[c] = m;
      stddev[c] = rows > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    }
  }
}

#else

std::size_t ucb_argmax(std::span<const double> means, std::span<const double> counts,
                       double bonus_numerator) {
  return scalar::ucb_argmax(means, counts, bonus_numerator);
}

void column_mean_std(std::span<const double> matrix, std::size_t rows, std::size_t cols,
                     std::span<double> mean, std::span<double> stddev) {
  scalar::column_mean_std(matrix, rows, cols, mean, stddev);
}

#endif

}  // namespace mpbandit::kernels::avx2
