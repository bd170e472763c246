#include "hk/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "hk/core.hpp"
#include "hk/util.hpp"

namespace hk::steady {

double kernel_K(double x, double y, double R) {
  const auto band = [&] { return 0.5 * (R + x - y) * (R - x + y); };
  const auto inner = [&] { return -0.5 * x * (x - 2.0 * y); };
  const auto tail = [&] { return 0.5 * (y * y - R * R); };

  if (std::fabs(x) > 2.0 * R) {
    if (x - R <= y && y <= x + R) return band();
    if (-R <= y && y <= R) return tail();
    return 0.0;
  }
  if (x >= 0.0) {
    if (R <= y && y <= x + R) return band();
    if (x - R <= y && y <= R) return inner();
    if (-R <= y && y <= x - R) return tail();
    return 0.0;
  }
  if (x - R <= y && y <= -R) return band();
  if (-R <= y && y <= x + R) return inner();
  if (x + R <= y && y <= R) return tail();
  return 0.0;
}

double ClusterProfile::operator()(double x) const {
  const double d = signed_displacement(center, x, L);
  return C * std::exp(-std::min(d * d, R * R) / (sigma * sigma));
}

ClusterProfile make_profile(double center, double R, double sigma, double L) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma: must be > 0");
  if (!(R > 0.0 && R <= 0.5 * L)) throw std::invalid_argument("R: must satisfy 0 < R <= L/2");
  // Core Gaussian over |delta| <= R plus the flat plateau on the rest.
  const double core = sigma * std::sqrt(std::numbers::pi) * std::erf(R / sigma);
  const double plateau = (L - 2.0 * R) * std::exp(-(R * R) / (sigma * sigma));
  return ClusterProfile{wrap(center, L), sigma, R, L, 1.0 / (core + plateau)};
}

double asymptotic_profile(double x, double center, double R, double sigma, double L) {
  return make_profile(center, R, sigma, L)(x);
}

std::vector<double> residual_grid(std::size_t n) {
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("residual grid needs an odd point count >= 3");
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j)
    x[j] = -0.5 + static_cast<double>(j) / static_cast<double>(n - 1);
  x[(n - 1) / 2] = 0.0;
  return x;
}

double fixed_point_residual(std::span<const double> rho, double R, double sigma) {
  const std::size_t n = rho.size();
  const auto x = residual_grid(n);
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma: must be > 0");

  double peak = 0.0;
  for (double v : rho) {
    if (!(v >= 0.0)) throw std::invalid_argument("density must be nonnegative");
    peak = std::max(peak, v);
  }
  for (std::size_t j = 0; j < n / 2; ++j)
    if (std::fabs(rho[j] - rho[n - 1 - j]) > 0.01 * peak)
      throw std::invalid_argument("asymmetric input");

  const double dx = 1.0 / static_cast<double>(n - 1);
  auto trapezoid_weight = [&](std::size_t j) { return (j == 0 || j == n - 1) ? 0.5 * dx : dx; };

  double mass = 0.0;
  for (std::size_t j = 0; j < n; ++j) mass += trapezoid_weight(j) * rho[j];
  if (std::fabs(mass - 1.0) > 1e-3) throw std::invalid_argument("density must have unit mass");

  const double rho0 = rho[(n - 1) / 2];
  const double scale = 2.0 / (sigma * sigma);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double integral = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      // The window is one period: neighbours within R across x = +-1/2 count too.
      const double k = kernel_K(x[i], x[j], R) + kernel_K(x[i], x[j] + 1.0, R) + kernel_K(x[i], x[j] - 1.0, R);
      integral += trapezoid_weight(j) * k * rho[j];
    }
    worst = std::max(worst, std::fabs(rho[i] - rho0 * std::exp(scale * integral)));
  }
  return worst;
}

std::vector<double> sample_profile_on_window(double R, double sigma, std::size_t intervals,
                                             double shift) {
  const auto x = residual_grid(intervals + 1);
  // Window [-1/2, 1/2] is one period; center at `shift`.
  const auto prof = make_profile(shift, R, sigma, 1.0);
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = prof(x[j]);
  return out;
}

std::vector<double> multi_cluster_profile(std::span<const double> centers, double R, double sigma,
                                          std::size_t n, double L) {
  if (centers.empty()) throw std::invalid_argument("need at least one center");
  for (std::size_t a = 0; a < centers.size(); ++a)
    for (std::size_t b = a + 1; b < centers.size(); ++b)
      if (periodic_distance(centers[a], centers[b], L) <= 2.0 * R)
        throw std::invalid_argument("clusters interact");

  std::vector<ClusterProfile> profiles;
  for (double c : centers) profiles.push_back(make_profile(c, R, sigma, L));
  const double w = 1.0 / static_cast<double>(centers.size());
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = L * static_cast<double>(j) / static_cast<double>(n);
    for (const auto& p : profiles) out[j] += w * p(x);
  }
  return out;
}

double bump_variance(std::span<const double> rho, double window, double L) {
  const std::size_t n = rho.size();
  if (n == 0) throw std::invalid_argument("empty density");
  const double dx = L / static_cast<double>(n);
  const auto peak = static_cast<std::size_t>(std::max_element(rho.begin(), rho.end()) - rho.begin());
  const double x_peak = static_cast<double>(peak) * dx;

  // Refine the center as the weighted mean displacement inside the window.
  double m0 = 0.0, m1 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double d = signed_displacement(x_peak, static_cast<double>(j) * dx, L);
    if (std::fabs(d) <= window) {
      m0 += rho[j];
      m1 += rho[j] * d;
    }
  }
  const double center = wrap(x_peak + m1 / m0, L);
  double w0 = 0.0, w2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double d = signed_displacement(center, static_cast<double>(j) * dx, L);
    if (std::fabs(d) <= window) {
      w0 += rho[j];
      w2 += rho[j] * d * d;
    }
  }
  return w2 / w0;
}

void write_kernel_slice_csv(std::ostream& os, double y0, double R, std::span<const double> xs) {
  os << "x,K(x,y0)\n";
  for (double x : xs) os << util::fmt_g(x, 9) << ',' << util::fmt_g(kernel_K(x, y0, R), 12) << '\n';
}

void write_profile_csv(std::ostream& os, std::span<const double> xs, std::span<const double> rho) {
  os << "x,rho0\n";
  for (std::size_t j = 0; j < xs.size(); ++j)
    os << util::fmt_g(xs[j], 9) << ',' << util::fmt_g(rho[j], 12) << '\n';
}

void write_residual_csv(std::ostream& os, std::span<const double> sigmas,
                        std::span<const double> residuals) {
  os << "sigma,residual\n";
  for (std::size_t j = 0; j < sigmas.size(); ++j)
    os << util::fmt_g(sigmas[j], 9) << ',' << util::fmt_g(residuals[j], 12) << '\n';
}

}  // namespace hk::steady
