#include "hk/stability.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "hk/util.hpp"

namespace hk::stability {

namespace {
constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;
}  // namespace

double gamma_of(double R, double sigma) { return sigma * sigma / (4.0 * R * R * R); }

double f_gamma(double s, double gamma) {
  const double s2 = s * s;
  if (s < 1e-4) {
    // sin(s)/s - cos(s) = s^2/3 - s^4/30 + s^6/840 - s^8/45360 + ...
    return s2 * (1.0 / 3.0 - s2 * (1.0 / 30.0 - s2 * (1.0 / 840.0 - s2 / 45360.0))) - gamma * s2;
  }
  return std::sin(s) / s - std::cos(s) - gamma * s2;
}

Maximum golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                           std::size_t samples, double tol) {
  if (samples < 3 || !(hi > lo)) throw std::invalid_argument("golden_section_max: bad bracket");
  const double dx = (hi - lo) / static_cast<double>(samples);
  std::size_t best = 1;
  double best_val = f(lo + dx);
  for (std::size_t i = 2; i <= samples; ++i) {
    const double v = f(lo + static_cast<double>(i) * dx);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  double a = lo + static_cast<double>(best - 1) * dx;
  double b = std::min(hi, lo + static_cast<double>(best + 1) * dx);

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol * std::max(1.0, std::fabs(a) + std::fabs(b))) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  Maximum m{0.5 * (a + b), f(0.5 * (a + b))};
  // The refined point never loses to the best grid sample.
  if (best_val > m.value) m = {lo + static_cast<double>(best) * dx, best_val};
  return m;
}

double most_unstable_s(double gamma) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma: must be >= 0");
  if (gamma >= 1.0 / 3.0) throw NoUnstableMode();
  return golden_section_max([gamma](double s) { return f_gamma(s, gamma); }, 0.0, two_pi).arg;
}

double expected_cluster_count(double R, double gamma) {
  if (!(R > 0.0 && R <= 0.5)) throw std::invalid_argument("R: must satisfy 0 < R <= 1/2");
  return most_unstable_s(gamma) / (two_pi * R);
}

double small_s_coefficient(int d) {
  if (d < 1) throw std::invalid_argument("d: must be >= 1");
  const double dd = d;
  return std::pow(pi, dd / 2.0) / (dd * (dd + 2.0) * std::tgamma(dd / 2.0));
}

double critical_sigma_disordered(double R, int d) {
  if (!(R > 0.0)) throw std::invalid_argument("R: must be > 0");
  return std::sqrt(4.0 * small_s_coefficient(d) * R * R * R);
}

double critical_sigma_clustered(double R) {
  if (!(R > 0.0)) throw std::invalid_argument("R: must be > 0");
  return std::sqrt(2.0 * (R + R * R / std::sqrt(3.0)) / pi);
}

double ball_volume(int n, double r) {
  if (n < 0) throw std::invalid_argument("ball dimension must be >= 0");
  if (n == 0) return 1.0;
  const double nn = n;
  return std::pow(pi, nn / 2.0) / std::tgamma(nn / 2.0 + 1.0) * std::pow(r, nn);
}

double F_gamma_d(double s, double gamma, int d) {
  if (d < 1) throw std::invalid_argument("d: must be >= 1");
  if (!(s >= 0.0)) throw std::invalid_argument("s: must be >= 0");
  if (s == 0.0) return 0.0;
  // Reduce to the first coordinate: slices of the ball are (d-1)-balls of
  // radius sqrt(1 - z^2). Substituting z = sin(t) removes the endpoint
  // square-root singularity for even d.
  auto integrand = [s, d](double t) {
    const double z = std::sin(t);
    const double c = std::cos(t);
    return z * std::sin(s * z) * ball_volume(d - 1, c) * c;
  };
  using boost::math::quadrature::gauss_kronrod;
  double err = 0.0;
  const double integral =
      gauss_kronrod<double, 31>::integrate(integrand, -pi / 2.0, pi / 2.0, 15, 1e-13, &err);
  return 0.5 * s * integral - gamma * s * s;
}

double most_unstable_s_d(double gamma, int d) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma: must be >= 0");
  if (gamma >= small_s_coefficient(d)) throw NoUnstableMode();
  return golden_section_max([gamma, d](double s) { return F_gamma_d(s, gamma, d); }, 0.0, two_pi,
                            2000, 1e-10)
      .arg;
}

double dispersion_growth_rate(int k, double R, double sigma) {
  if (k < 1) throw std::invalid_argument("k: must be >= 1");
  return 2.0 * R * f_gamma(two_pi * k * R, gamma_of(R, sigma));
}

bool has_unstable_integer_mode(double R, double sigma) {
  const double gamma = gamma_of(R, sigma);
  // |sin(s)/s - cos(s)| <= 2, so f_gamma < 0 once gamma s^2 > 2.
  const double s_max = gamma > 0.0 ? std::sqrt(2.0 / gamma) : two_pi;
  const auto k_max = static_cast<long>(std::min(1e6, std::ceil(s_max / (two_pi * R)) + 1.0));
  for (long k = 1; k <= std::max(k_max, 2L); ++k)
    if (f_gamma(two_pi * static_cast<double>(k) * R, gamma) > 0.0) return true;
  return false;
}

std::string_view to_string(PhaseLabel label) {
  switch (label) {
    case PhaseLabel::disordered_unstable: return "disordered-unstable";
    case PhaseLabel::bistable: return "bistable";
    case PhaseLabel::clustered_unstable: return "clustered-unstable";
    case PhaseLabel::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

PhaseRegion classify_phase_region(double R, double sigma) {
  if (!(R > 0.0 && R <= 0.5)) throw std::invalid_argument("R: must satisfy 0 < R <= 1/2");
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma: must be >= 0");
  PhaseRegion r;
  r.sigma_lower = critical_sigma_disordered(R, 1);
  r.sigma_upper = critical_sigma_clustered(R);
  if (sigma < r.sigma_lower) {
    r.label = has_unstable_integer_mode(R, sigma) ? PhaseLabel::disordered_unstable
                                                  : PhaseLabel::indeterminate;
  } else if (sigma > r.sigma_upper) {
    r.label = PhaseLabel::clustered_unstable;
  } else {
    r.label = PhaseLabel::bistable;
  }
  return r;
}

void write_f_gamma_csv(std::ostream& os, std::span<const double> s_values,
                       std::span<const double> gammas) {
  os << 's';
  if (gammas.size() == 1) {
    os << ",f_gamma";
  } else {
    for (double g : gammas) os << ",f_gamma@" << util::fmt_g(g, 6);
  }
  os << '\n';
  for (double s : s_values) {
    os << util::fmt_g(s, 9);
    for (double g : gammas) os << ',' << util::fmt_g(f_gamma(s, g), 12);
    os << '\n';
  }
}

void write_zones_csv(std::ostream& os, std::span<const double> R_values) {
  os << "R,sigma_lower,sigma_upper,label\n";
  for (double R : R_values) {
    const auto region = classify_phase_region(R, 0.0);
    const auto probe = classify_phase_region(R, 0.99 * region.sigma_lower);
    os << util::fmt_g(R, 9) << ',' << util::fmt_g(region.sigma_lower, 12) << ','
       << util::fmt_g(region.sigma_upper, 12) << ',' << to_string(probe.label) << '\n';
  }
}

}  // namespace hk::stability
