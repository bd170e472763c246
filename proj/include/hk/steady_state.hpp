// Clustered steady states of the mean-field equation: the kernel of the
// integral fixed-point form, the small-noise Gaussian profile, and residual
// checks. Coordinates follow the analysis convention: one cluster at x = 0 on
// the window [-1/2, 1/2].
#pragma once

#include <iosfwd>
#include <span>
#include <vector>

namespace hk::steady {

/// K(x, y) = int_0^x (y - xi) 1{|y - xi| <= R} dxi, in closed form.
double kernel_K(double x, double y, double R);

/// Single-cluster profile C exp(-min(delta^2, R^2) / sigma^2), delta the
/// periodic displacement from center. C makes the profile integrate to 1
/// over one period, plateau included.
struct ClusterProfile {
  double center = 0.0;
  double sigma = 0.0;
  double R = 0.0;
  double L = 1.0;
  double C = 0.0;

  double operator()(double x) const;
};

ClusterProfile make_profile(double center, double R, double sigma, double L = 1.0);

/// Convenience: evaluate a freshly normalized profile at x.
double asymptotic_profile(double x, double center, double R, double sigma, double L = 1.0);

/// Samples x_j = -1/2 + j / (n - 1), j = 0..n-1. n must be odd so x = 0 is a
/// grid point.
std::vector<double> residual_grid(std::size_t n);

/// max_j |rho_j - rho(0) exp{(2 / sigma^2) int K(x_j, y) rho(y) dy}|, the
/// integral by the trapezoid rule on the same grid. Throws
/// std::invalid_argument("asymmetric input") when rho deviates from its
/// mirror image by more than 1% of its peak.
double fixed_point_residual(std::span<const double> rho, double R, double sigma);

/// Samples of the normalized single-cluster profile centered at 0 on
/// residual_grid(intervals + 1).
std::vector<double> sample_profile_on_window(double R, double sigma, std::size_t intervals,
                                             double shift = 0.0);

/// Equal-weight mixture of single-cluster profiles sampled at x_j = j L / n.
/// Throws std::invalid_argument("clusters interact") when two centers are
/// within 2R of each other.
std::vector<double> multi_cluster_profile(std::span<const double> centers, double R, double sigma,
                                          std::size_t n, double L = 1.0);

/// Variance of the bump around the grid maximum of a periodic density,
/// restricted to |delta| <= window.
double bump_variance(std::span<const double> rho, double window, double L = 1.0);

void write_kernel_slice_csv(std::ostream& os, double y0, double R, std::span<const double> xs);
void write_profile_csv(std::ostream& os, std::span<const double> xs, std::span<const double> rho);
void write_residual_csv(std::ostream& os, std::span<const double> sigmas,
                        std::span<const double> residuals);

}  // namespace hk::steady
