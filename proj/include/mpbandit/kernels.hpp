#pragma once

// Data-parallel inner loops used on every simulated round (index argmax) and
// on every aggregation (column statistics). Each kernel has a scalar reference
// and an AVX2 variant. Both perform the same IEEE operations in the same
// per-element order, so the results are bit-identical and the variant in use
// never changes experiment output.

#include <cstddef>
#include <span>
#include <string_view>

namespace mpbandit::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);
bool isa_supported(Isa isa);

/// ISA chosen at startup: AVX2 when the CPU has it, unless the environment
/// variable MPBANDIT_ISA=scalar forces the reference path.
Isa active_isa();
/// Overrides the selection (tests). Throws InvalidInput if unsupported.
void set_active_isa(Isa isa);

/// Index of the maximal UCB score mean[k] + sqrt(bonus_numerator / count[k]).
///
/// A zero count scores +infinity. Ties (including several zero counts) go to
/// the smallest index. `means` and `counts` must have equal, non-zero length.
std::size_t ucb_argmax(std::span<const double> means, std::span<const double> counts,
                       double bonus_numerator);

/// Column-wise sample mean and standard deviation (n - 1 denominator) of a
/// row-major rows x cols matrix. With one row the deviation is 0.
void column_mean_std(std::span<const double> matrix, std::size_t rows, std::size_t cols,
                     std::span<double> mean, std::span<double> stddev);

namespace scalar {
std::size_t ucb_argmax(std::span<const double> means, std::span<const double> counts,
                       double bonus_numerator);
void column_mean_std(std::span<const double> matrix, std::size_t rows, std::size_t cols,
                     std::span<double> mean, std::span<double> stddev);
}  // namespace scalar

namespace avx2 {
std::size_t ucb_argmax(std::span<const double> means, std::span<const double> counts,
                       double bonus_numerator);
void column_mean_std(std::span<const double> matrix, std::size_t rows, std::size_t cols,
                     std::span<double> mean, std::span<double> stddev);
}  // namespace avx2

}  // namespace mpbandit::kernels
