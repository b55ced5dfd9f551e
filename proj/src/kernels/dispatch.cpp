#include <cstdlib>
#include <string>

#include "mpbandit/errors.hpp"
#include "mpbandit/kernels.hpp"

namespace mpbandit::kernels {
namespace {

Isa detect() {
  if (const char* forced = std::getenv("MPBANDIT_ISA")) {
    if (std::string(forced) == "scalar") return Isa::Scalar;
  }
  return isa_supported(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

Isa& current() {
  static Isa isa = detect();
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_supported(Isa isa) {
  if (isa == Isa::Scalar) return true;
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() { return current(); }

void set_active_isa(Isa isa) {
  if (!isa_supported(isa)) throw InvalidInput(std::string("ISA not supported here: ") + std::string(isa_name(isa)));
  current() = isa;
}

std::size_t ucb_argmax(std::span<const double> means, std::span<const double> counts,
                       double bonus_numerator) {
  if (means.empty() || means.size() != counts.size()) {
    throw InvalidInput("ucb_argmax: means and counts must be non-empty and equally sized");
  }
  return current() == Isa::Avx2 ? avx2::ucb_argmax(means, counts, bonus_numerator)
                                : scalar::ucb_argmax(means, counts, bonus_numerator);
}

void column_mean_std(std::span<const double> matrix, std::size_t rows, std::size_t cols,
                     std::span<double> mean, std::span<double> stddev) {
  if (rows == 0 || matrix.size() != rows * cols || mean.size() != cols || stddev.size() != cols) {
    throw InvalidInput("column_mean_std: shape mismatch");
  }
  if (current() == Isa::Avx2) {
    avx2::column_mean_std(matrix, rows, cols, mean, stddev);
  } else {
    scalar::column_mean_std(matrix, rows, cols, mean, stddev);
  }
}

}  // namespace mpbandit::kernels
