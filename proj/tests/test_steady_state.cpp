#include <doctest.h>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "hk/spectral.hpp"
#include "hk/steady_state.hpp"

using namespace hk;
using steady::kernel_K;

namespace {

// K(x, y) = int_0^x (y - xi) 1{|y - xi| <= R} dxi. The integrand is linear on
// the overlap of [0, x] with [y - R, y + R], where Gauss-Legendre is exact.
double kernel_oracle(double x, double y, double R) {
  const double lo = std::max(std::min(0.0, x), y - R);
  const double hi = std::min(std::max(0.0, x), y + R);
  if (hi <= lo) return 0.0;
  const double v = boost::math::quadrature::gauss<double, 7>::integrate([y](double xi) { return y - xi; }, lo, hi);
  return x >= 0.0 ? v : -v;
}

double integrate_profile(const steady::ClusterProfile& p, int moment) {
  using boost::math::quadrature::gauss_kronrod;
  auto f = [&](double d) { return std::pow(d, moment) * p(p.center + d); };
  const double half = 0.5 * p.L;
  return gauss_kronrod<double, 61>::integrate(f, -half, -p.R, 10, 1e-14) +
         gauss_kronrod<double, 61>::integrate(f, -p.R, p.R, 10, 1e-14) +
         gauss_kronrod<double, 61>::integrate(f, p.R, half, 10, 1e-14);
}

}  // namespace

TEST_SUITE("steady-state") {

TEST_CASE("kernel examples") {
  CHECK(kernel_K(0.0, 0.03, 0.1) == 0.0);
  CHECK(kernel_K(0.0, -0.2, 0.1) == 0.0);
  CHECK(kernel_K(0.5, 0.0, 0.1) == doctest::Approx(-0.005).epsilon(1e-12));
  CHECK(kernel_K(0.05, 0.0, 0.1) == doctest::Approx(-0.00125).epsilon(1e-12));
}

TEST_CASE("closed-form kernel matches quadrature on random triples") {
  std::mt19937_64 g(21);
  std::uniform_real_distribution<double> u(-0.5, 0.5), ur(0.005, 0.5);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double x = u(g), y = u(g), R = ur(g);
    worst = std::max(worst, std::fabs(kernel_K(x, y, R) - kernel_oracle(x, y, R)));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("closed form also holds for shifted images y +- 1") {
  std::mt19937_64 g(22);
  std::uniform_real_distribution<double> u(-0.5, 0.5), ur(0.005, 0.5);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double x = u(g), y = u(g) + (i % 2 ? 1.0 : -1.0), R = ur(g);
    worst = std::max(worst, std::fabs(kernel_K(x, y, R) - kernel_oracle(x, y, R)));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("kernel is continuous across branch boundaries in x") {
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> u(-0.5, 0.5), ur(0.01, 0.24);
  for (int i = 0; i < 2000; ++i) {
    const double R = ur(g), y = u(g);
    for (double b : {-2.0 * R, 0.0, 2.0 * R}) {
      const double jump = std::fabs(kernel_K(b + 1e-8, y, R) - kernel_K(b - 1e-8, y, R));
      REQUIRE(jump < 1e-7);
    }
  }
}

TEST_CASE("profile normalization and shape") {
  for (double R : {0.05, 0.1, 0.2, 0.5})
    for (double s : {0.01, 0.02, 0.05, 0.3}) {
      const auto p = steady::make_profile(0.3, R, s);
      CHECK(p.C > 0.0);
      CHECK(integrate_profile(p, 0) == doctest::Approx(1.0).epsilon(1e-8));
    }
  const auto p = steady::make_profile(0.5, 0.1, 0.02);
  CHECK(p(0.5) == p.C);
  CHECK(p(0.65) == doctest::Approx(p.C * std::exp(-25.0)));
  CHECK(p(0.9) == p(0.65));
  CHECK(steady::asymptotic_profile(0.55, 0.5, 0.1, 0.02) == doctest::Approx(p(0.55)));
  CHECK(integrate_profile(p, 2) == doctest::Approx(2e-4).epsilon(0.01));
}

TEST_CASE("fixed-point residual") {
  const std::size_t n = 2049;
  std::vector<double> one(n, 1.0);
  CHECK(steady::fixed_point_residual(one, 0.1, 0.02) < 1e-12);

  const auto rho = steady::sample_profile_on_window(0.1, 0.02, 2048);
  const double r = steady::fixed_point_residual(rho, 0.1, 0.02);
  CHECK(r <= 0.05 * rho[(n - 1) / 2]);

  const auto shifted = steady::sample_profile_on_window(0.1, 0.02, 2048, 0.05);
  CHECK_THROWS_WITH_AS(steady::fixed_point_residual(shifted, 0.1, 0.02), "asymmetric input", std::invalid_argument);
  std::vector<double> heavy(n, 2.0);
  CHECK_THROWS_AS(steady::fixed_point_residual(heavy, 0.1, 0.02), std::invalid_argument);
  std::vector<double> even(2048, 1.0);
  CHECK_THROWS_AS(steady::fixed_point_residual(even, 0.1, 0.02), std::invalid_argument);
}

TEST_CASE("residual shrinks with sigma") {
  double prev = 1e9;
  for (double s : {0.04, 0.02, 0.01}) {
    const double r = steady::fixed_point_residual(steady::sample_profile_on_window(0.1, s, 2048), 0.1, s);
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("multi-cluster profiles") {
  const std::size_t n = 1024;
  std::vector<double> one{0.3};
  const auto single = steady::multi_cluster_profile(one, 0.1, 0.02, n);
  const auto p = steady::make_profile(0.3, 0.1, 0.02);
  for (std::size_t j = 0; j < n; j += 37) CHECK(single[j] == doctest::Approx(p(static_cast<double>(j) / n)));

  std::vector<double> two{0.25, 0.75};
  const auto rho = steady::multi_cluster_profile(two, 0.1, 0.02, n);
  double mass = 0.0;
  for (double v : rho) mass += v / n;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rho[256] == doctest::Approx(rho[768]));
  std::vector<double> close{0.2, 0.35};
  CHECK_THROWS_WITH_AS(steady::multi_cluster_profile(close, 0.1, 0.02, n), "clusters interact", std::invalid_argument);
}

TEST_CASE("separated clusters stay put under the PDE") {
  ModelParams prm;
  prm.R = 0.05;
  prm.sigma = 0.02;
  const pde::SpectralSolver solver(prm, {});
  std::vector<double> centers{0.2, 0.7};
  const auto init = pde::make_initial(solver, steady::multi_cluster_profile(centers, 0.05, 0.02, 512));
  const auto res = pde::evolve(solver, init, 20.0, 100000);
  const auto rho = solver.physical(res.final_state);
  const auto cl = detect_density_clusters(rho, pde::cluster_level());
  REQUIRE(cl.size() == 2);
  CHECK(periodic_distance(cl[0].center, 0.2) < 0.01);
  CHECK(periodic_distance(cl[1].center, 0.7) < 0.01);
}

TEST_CASE("bump variance of a sampled profile") {
  const std::size_t n = 4096;
  std::vector<double> c{0.4};
  const auto rho = steady::multi_cluster_profile(c, 0.1, 0.02, n);
  CHECK(steady::bump_variance(rho, 0.1) == doctest::Approx(2e-4).epsilon(0.01));
}

}
