#include "hk/kernels.hpp"

#include <cassert>
#include <cmath>

namespace hk::kernels {

namespace {

// Shortest signed displacement in (-L/2, L/2] for inputs already in [0, L).
inline double circ(double d, double L) {
  const double half = 0.5 * L;
  if (d > half) d -= L;
  else if (d <= -half) d += L;
  return d;
}

inline double drift_one(std::span<const double> x, std::size_t i, double R, double L) {
  const double xi = x[i];
  const double half = 0.5 * L;
  const std::size_t n = x.size();
  // Four interleaved partial sums break the add dependency chain; the order
  // is fixed, so every caller gets the same bits.
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    for (std::size_t q = 0; q < 4; ++q) {
      double d = x[j + q] - xi;
      d -= (d > half) ? L : 0.0;
      d += (d <= -half) ? L : 0.0;
      acc[q] += (std::fabs(d) <= R) ? d : 0.0;
    }
  }
  for (; j < n; ++j) {
    const double d = circ(x[j] - xi, L);
    if (d <= R && d >= -R) acc[0] += d;
  }
  return ((acc[0] + acc[1]) + (acc[2] + acc[3])) / static_cast<double>(n);
}

inline std::uint64_t row_count(std::span<const double> x, std::size_t i, double R, double L) {
  const double xi = x[i];
  std::uint64_t c = 0;
  const double half = 0.5 * L;
  for (std::size_t j = 0; j < x.size(); ++j) {
    double d = x[j] - xi;
    d -= (d > half) ? L : 0.0;
    d += (d <= -half) ? L : 0.0;
    c += (std::fabs(d) <= R) ? 1u : 0u;
  }
  return c;
}

}  // namespace

void drift_serial(std::span<const double> x, double R, double L, std::span<double> out) {
  assert(out.size() == x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = drift_one(x, i, R, L);
}

void drift_parallel(std::span<const double> x, double R, double L, std::span<double> out) {
  assert(out.size() == x.size());
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) if (x.size() >= parallel_threshold)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = drift_one(x, static_cast<std::size_t>(i), R, L);
}

std::uint64_t pair_count_serial(std::span<const double> x, double R, double L) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < x.size(); ++i) total += row_count(x, i, R, L);
  return total;
}

std::uint64_t pair_count_parallel(std::span<const double> x, double R, double L) {
  std::uint64_t total = 0;
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) reduction(+ : total) if (x.size() >= parallel_threshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) total += row_count(x, static_cast<std::size_t>(i), R, L);
  return total;
}

}  // namespace hk::kernels
