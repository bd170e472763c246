// Linear stability of the uniform state and the resulting phase taxonomy.
//
// A perturbation rho = 1 + p(t) exp(2 pi i k x) of the uniform density grows
// as p_t / p = 2R f_gamma(s) with s = 2 pi k R and gamma = sigma^2 / (4 R^3).
#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hk::stability {

class NoUnstableMode : public std::domain_error {
 public:
  NoUnstableMode() : std::domain_error("no unstable mode (gamma >= 1/3)") {}
};

/// gamma = sigma^2 / (4 R^3).
double gamma_of(double R, double sigma);

/// sin(s)/s - cos(s) - gamma s^2; equal to 0 at s = 0.
double f_gamma(double s, double gamma);

struct Maximum {
  double arg = 0.0;
  double value = 0.0;
};

/// Maximizes f over (lo, hi]: dense scan on `samples` points, then
/// golden-section refinement inside the bracketing cells.
Maximum golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                           std::size_t samples = 10000, double tol = 1e-12);

/// argmax of f_gamma over (0, 2 pi]. Throws NoUnstableMode for gamma >= 1/3.
double most_unstable_s(double gamma);

/// s*(gamma) / (2 pi R): number of clusters the fastest mode produces.
double expected_cluster_count(double R, double gamma);

/// sigma below which the uniform state is linearly unstable in dimension d:
/// sigma^2 = 4 pi^{d/2} / (d (d+2) Gamma(d/2)) R^3.
double critical_sigma_disordered(double R, int d = 1);

/// sigma above which the clustered state is unstable:
/// sigma^2 = 2 (R + R^2 / sqrt(3)) / pi.
double critical_sigma_clustered(double R);

/// Volume of the n-ball of radius r.
double ball_volume(int n, double r);

/// (s/2) int_{|z| <= 1} z_1 sin(s z_1) dz - gamma s^2 over the unit d-ball.
double F_gamma_d(double s, double gamma, int d);

/// Small-s coefficient pi^{d/2} / (d (d+2) Gamma(d/2)) of F_0(s) / s^2.
double small_s_coefficient(int d);

/// argmax of F_gamma_d over (0, 2 pi].
double most_unstable_s_d(double gamma, int d);

/// 2R f_gamma(2 pi k R).
double dispersion_growth_rate(int k, double R, double sigma);

/// True if some integer k >= 1 has f_gamma(2 pi k R) > 0.
bool has_unstable_integer_mode(double R, double sigma);

enum class PhaseLabel { disordered_unstable, bistable, clustered_unstable, indeterminate };

std::string_view to_string(PhaseLabel label);

struct PhaseRegion {
  PhaseLabel label = PhaseLabel::indeterminate;
  double sigma_lower = 0.0;  ///< critical_sigma_disordered(R, 1)
  double sigma_upper = 0.0;  ///< critical_sigma_clustered(R)
};

PhaseRegion classify_phase_region(double R, double sigma);

/// `s,f_gamma` for one gamma; `s,f_gamma@g1,f_gamma@g2,...` for several.
void write_f_gamma_csv(std::ostream& os, std::span<const double> s_values,
                       std::span<const double> gammas);

/// `R,sigma_lower,sigma_upper,label`. The label classifies the point just
/// below the lower curve, which reads "indeterminate" where the small-s
/// boundary is not backed by an unstable integer mode.
void write_zones_csv(std::ostream& os, std::span<const double> R_values);

}  // namespace hk::stability
