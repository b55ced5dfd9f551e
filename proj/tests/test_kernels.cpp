#include <doctest.h>

#include <bit>
#include <cmath>
#include <random>
#include <vector>

#include "mpbandit/kernels.hpp"

using namespace mpbandit;
namespace k = mpbandit::kernels;

namespace {

struct IsaGuard {
  k::Isa saved = k::active_isa();
  ~IsaGuard() { k::set_active_isa(saved); }
};

std::uint64_t bits(double x) { return std::bit_cast<std::uint64_t>(x); }

}  // namespace

TEST_CASE("scalar ucb_argmax reference behaviour") {
  const std::vector<double> means{1.2, 1.5, 1.5, 0.9};
  const std::vector<double> ones(4, 1.0);
  CHECK(k::scalar::ucb_argmax(means, ones, 4.0 * std::log(5.0)) == 1);  // tie -> smallest index

  const std::vector<double> with_zero{3.0, 1.0, 0.0, 0.0};
  CHECK(k::scalar::ucb_argmax(means, with_zero, 1.0) == 2);  // first unsampled arm

  // Equal means: fewer pulls, bigger bonus.
  const std::vector<double> same{0.5, 0.5};
  CHECK(k::scalar::ucb_argmax(same, std::vector<double>{10.0, 20.0}, 4.0 * std::log(30.0)) == 0);
  CHECK(k::scalar::ucb_argmax(same, std::vector<double>{20.0, 10.0}, 4.0 * std::log(30.0)) == 1);
}

TEST_CASE("avx2 ucb_argmax matches the scalar reference exactly") {
  if (!k::isa_supported(k::Isa::Avx2)) return;
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20000; ++trial) {
    const std::size_t n = 1 + trial % 41;
    std::vector<double> means(n), counts(n);
    const bool coarse = trial % 3 == 0;  // coarse values force ties
    for (std::size_t i = 0; i < n; ++i) {
      means[i] = coarse ? 0.25 * static_cast<double>(rng() % 4) : std::uniform_real_distribution<double>(-1, 2)(rng);
      counts[i] = static_cast<double>(coarse ? 1 + rng() % 3 : 1 + rng() % 1000);
    }
    if (trial % 7 == 0) counts[rng() % n] = 0.0;
    if (trial % 11 == 0) counts[rng() % n] = 0.0;
    const double numer = 4.0 * std::log(static_cast<double>(1 + rng() % 100000));
    CHECK(k::avx2::ucb_argmax(means, counts, numer) == k::scalar::ucb_argmax(means, counts, numer));
  }
}

TEST_CASE("avx2 column_mean_std matches the scalar reference bit for bit") {
  if (!k::isa_supported(k::Isa::Avx2)) return;
  std::mt19937_64 rng(99);
  for (std::size_t rows = 1; rows <= 12; ++rows) {
    for (std::size_t cols = 1; cols <= 19; ++cols) {
      std::vector<double> m(rows * cols);
      for (auto& x : m) x = std::uniform_real_distribution<double>(0, 1e4)(rng);
      std::vector<double> ms(cols), ss(cols), mv(cols), sv(cols);
      k::scalar::column_mean_std(m, rows, cols, ms, ss);
      k::avx2::column_mean_std(m, rows, cols, mv, sv);
      for (std::size_t c = 0; c < cols; ++c) {
        CHECK(bits(ms[c]) == bits(mv[c]));
        CHECK(bits(ss[c]) == bits(sv[c]));
      }
    }
  }
}

TEST_CASE("column_mean_std values") {
  const std::vector<double> m{0.0, 5.0, 2.0, 5.0};  // 2 rows x 2 cols
  std::vector<double> mean(2), sd(2);
  k::column_mean_std(m, 2, 2, mean, sd);
  CHECK(mean[0] == 1.0);
  CHECK(mean[1] == 5.0);
  CHECK(sd[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(sd[1] == 0.0);

  std::vector<double> one_mean(2), one_sd(2);
  k::column_mean_std(std::vector<double>{3.0, 4.0}, 1, 2, one_mean, one_sd);
  CHECK(one_sd[0] == 0.0);
  CHECK(one_sd[1] == 0.0);
}

TEST_CASE("dispatch honours the selected ISA") {
  IsaGuard guard;
  k::set_active_isa(k::Isa::Scalar);
  CHECK(k::active_isa() == k::Isa::Scalar);
  CHECK(k::ucb_argmax(std::vector<double>{0.1, 0.9}, std::vector<double>{5.0, 5.0}, 1.0) == 1);
  if (k::isa_supported(k::Isa::Avx2)) {
    k::set_active_isa(k::Isa::Avx2);
    CHECK(k::active_isa() == k::Isa::Avx2);
    CHECK(k::ucb_argmax(std::vector<double>{0.1, 0.9}, std::vector<double>{5.0, 5.0}, 1.0) == 1);
  }
  CHECK_THROWS(k::ucb_argmax(std::vector<double>{}, std::vector<double>{}, 1.0));
  CHECK_THROWS(k::ucb_argmax(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}, 1.0));
}
