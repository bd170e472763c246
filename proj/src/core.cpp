#include "hk/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "hk/kernels.hpp"

namespace hk {

void ModelParams::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (N < 1) fail("N: must be >= 1");
  if (!(L > 0.0) || !std::isfinite(L)) fail("L: must be positive");
  if (!(R > 0.0) || R > 0.5 * L) fail("R: must satisfy 0 < R <= L/2");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) fail("sigma: must be >= 0");
  if (!(h > 0.0) || !std::isfinite(h)) fail("h: must be > 0");
}

double wrap(double x, double L) {
  double y = std::fmod(x, L);
  if (y < 0.0) y += L;
  // fmod of a tiny negative number plus L can round up to exactly L.
  if (y >= L) y = 0.0;
  return y;
}

double signed_displacement(double a, double b, double L) {
  double d = wrap(b, L) - wrap(a, L);
  const double half = 0.5 * L;
  if (d > half) d -= L;
  else if (d <= -half) d += L;
  return d;
}

double periodic_distance(double a, double b, double L) {
  const double d = std::fabs(wrap(a, L) - wrap(b, L));
  return std::min(d, L - d);
}

double circular_mean(std::span<const double> positions, double L) {
  double c = 0.0, s = 0.0;
  const double k = 2.0 * std::numbers::pi / L;
  for (double x : positions) {
    c += std::cos(k * x);
    s += std::sin(k * x);
  }
  return wrap(std::atan2(s, c) / k, L);
}

double order_parameter(std::span<const double> positions, double R, double L) {
  const auto n = static_cast<double>(positions.size());
  if (positions.empty()) return 0.0;
  const auto pairs = kernels::pair_count(kernels::Exec::parallel, positions, R, L);
  return static_cast<double>(pairs) / (n * n);
}

double disordered_order_parameter(std::size_t N, double R, double L) {
  const double inv = 1.0 / static_cast<double>(N);
  return inv + (1.0 - inv) * 2.0 * R / L;
}

ClusterSet detect_clusters(std::span<const double> positions, double gap_threshold, double L) {
  if (positions.empty()) throw std::invalid_argument("no agents");
  if (!(gap_threshold > 0.0)) throw std::invalid_argument("gap_threshold must be > 0");

  const std::size_t n = positions.size();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = wrap(positions[i], L);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

  // gap[k] is the circular gap between sorted element k and k+1 (mod n).
  std::vector<std::size_t> cuts;
  for (std::size_t k = 0; k < n; ++k) {
    const double next = (k + 1 < n) ? x[order[k + 1]] : x[order[0]] + L;
    if (n > 1 && next - x[order[k]] > gap_threshold) cuts.push_back(k);
  }

  ClusterSet out;
  out.gap_threshold = gap_threshold;

  auto make = [&](std::size_t first, std::size_t len) {
    Cluster c;
    std::vector<double> pos;
    for (std::size_t q = 0; q < len; ++q) {
      const std::size_t idx = order[(first + q) % n];
      c.members.push_back(idx);
      pos.push_back(x[idx]);
    }
    c.width = len > 1 ? wrap(x[order[(first + len - 1) % n]] - x[order[first]], L) : 0.0;
    c.center = circular_mean(pos, L);
    std::sort(c.members.begin(), c.members.end());
    return c;
  };

  if (cuts.empty()) {
    Cluster c = make(0, n);
    // No gap exceeds the threshold: the run wraps the whole circle.
    if (n > 1) {
      double max_gap = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double next = (k + 1 < n) ? x[order[k + 1]] : x[order[0]] + L;
        max_gap = std::max(max_gap, next - x[order[k]]);
      }
      c.width = L - max_gap;
    }
    out.clusters.push_back(std::move(c));
    return out;
  }

  for (std::size_t c = 0; c < cuts.size(); ++c) {
    const std::size_t start = (cuts[c] + 1) % n;
    const std::size_t stop = cuts[(c + 1) % cuts.size()];
    const std::size_t len = (stop + n - start) % n + 1;
    out.clusters.push_back(make(start, len));
  }
  std::sort(out.clusters.begin(), out.clusters.end(),
            [](const Cluster& a, const Cluster& b) { return a.center < b.center; });
  return out;
}

std::vector<DensityCluster> detect_density_clusters(std::span<const double> rho, double level,
                                                    double L) {
  const std::size_t n = rho.size();
  std::vector<DensityCluster> out;
  if (n == 0) return out;
  const double dx = L / static_cast<double>(n);

  std::size_t start = n;
  for (std::size_t j = 0; j < n; ++j) {
    if (!(rho[j] > level)) {
      start = j;
      break;
    }
  }
  if (start == n) {
    // Every cell above level: a single circle-spanning cluster.
    DensityCluster c;
    double cs = 0.0, sn = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
      cs += rho[j] * std::cos(a);
      sn += rho[j] * std::sin(a);
      c.mass += rho[j] * dx;
      c.peak = std::max(c.peak, rho[j]);
    }
    c.center = wrap(std::atan2(sn, cs) * L / (2.0 * std::numbers::pi), L);
    c.width = L;
    out.push_back(c);
    return out;
  }

  // Walk once around the circle starting from a sub-threshold cell.
  std::size_t run_len = 0;
  DensityCluster cur;
  double cs = 0.0, sn = 0.0;
  for (std::size_t q = 1; q <= n; ++q) {
    const std::size_t j = (start + q) % n;
    if (rho[j] > level) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
      cs += rho[j] * std::cos(a);
      sn += rho[j] * std::sin(a);
      cur.mass += rho[j] * dx;
      cur.peak = std::max(cur.peak, rho[j]);
      ++run_len;
    } else if (run_len > 0) {
      cur.center = wrap(std::atan2(sn, cs) * L / (2.0 * std::numbers::pi), L);
      cur.width = static_cast<double>(run_len) * dx;
      out.push_back(cur);
      cur = DensityCluster{};
      cs = sn = 0.0;
      run_len = 0;
    }
  }
  std::sort(out.begin(), out.end(),
            [](const DensityCluster& a, const DensityCluster& b) { return a.center < b.center; });
  return out;
}

}  // namespace hk
