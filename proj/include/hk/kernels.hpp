// Data-parallel inner loops. Each kernel has a serial reference and an
// OpenMP version; both accumulate in the same order per output element, so
// their results are bit-identical for any thread count.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace hk::kernels {

enum class Exec { serial, parallel };

/// Agent count below which the parallel kernels stay on one thread.
inline constexpr std::size_t parallel_threshold = 512;

/// out[i] = (1/N) * sum_{j : |d_ij| <= R} d_ij, d_ij the signed circular
/// displacement x_j - x_i.
void drift_serial(std::span<const double> x, double R, double L, std::span<double> out);
void drift_parallel(std::span<const double> x, double R, double L, std::span<double> out);

/// Number of ordered pairs (i, j), diagonal included, with |x_i - x_j| <= R.
std::uint64_t pair_count_serial(std::span<const double> x, double R, double L);
std::uint64_t pair_count_parallel(std::span<const double> x, double R, double L);

inline void drift(Exec e, std::span<const double> x, double R, double L, std::span<double> out) {
  e == Exec::parallel ? drift_parallel(x, R, L, out) : drift_serial(x, R, L, out);
}

inline std::uint64_t pair_count(Exec e, std::span<const double> x, double R, double L) {
  return e == Exec::parallel ? pair_count_parallel(x, R, L) : pair_count_serial(x, R, L);
}

}  // namespace hk::kernels
