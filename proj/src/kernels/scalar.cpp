#include <cmath>

#include "mpbandit/kernels.hpp"

namespace mpbandit::kernels::scalar {

std::size_t ucb_argmax(std::span<const double> means, std::span<const double> counts,
                       double bonus_numerator) {
  const std::size_t n = means.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (counts[k] == 0.0) return k;
  }
  std::size_t best = 0;
  double best_score = means[0] + std::sqrt(bonus_numerator / counts[0]);
  for (std::size_t k = 1; k < n; ++k) {
    const double score = means[k] + std::sqrt(bonus_numerator / counts[k]);
    if (score > best_score) {
      best_score = score;
      best = k;
    }
  }
  return best;
}

void column_mean_std(std::span<const double> matrix, std::size_t rows, std::size_t cols,
                     std::span<double> mean, std::span<double> stddev) {
  const double n = static_cast<double>(rows);
  for (std::size_t c = 0; c < cols; ++c) {
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

}  // namespace mpbandit::kernels::scalar
