#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "hk/rng.hpp"
#include "hk/spectral.hpp"
#include "hk/stability.hpp"

using namespace hk;
using pde::cplx;

namespace {
constexpr double pi = std::numbers::pi;

// int_{-R}^{R} y exp(i 2 pi k y / L) dy / L by adaptive quadrature.
cplx multiplier_oracle(int k, double R, double L = 1.0) {
  using boost::math::quadrature::gauss_kronrod;
  const double q = 2.0 * pi * k / L;
  const double im = gauss_kronrod<double, 61>::integrate([q](double y) { return y * std::sin(q * y); }, -R, R, 10, 1e-14);
  const double re = gauss_kronrod<double, 61>::integrate([q](double y) { return y * std::cos(q * y); }, -R, R, 10, 1e-14);
  return cplx(re, im) / L;
}

ModelParams params(double R, double sigma) {
  ModelParams p;
  p.R = R;
  p.sigma = sigma;
  return p;
}
}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("solver config rules") {
  pde::SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.grid = 500;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.m = 100;
  c.grid = 256;  // < 3m+1 with dealiasing
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.dealias = false;
  CHECK_NOTHROW(c.validate());
  c.grid = 200;  // < 2m+2
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("interaction multiplier") {
  const cplx m5 = pde::interaction_multiplier(5, 0.1);
  CHECK(m5.real() == 0.0);
  CHECK(m5.imag() == doctest::Approx(1.0 / (50.0 * pi)).epsilon(1e-12));
  CHECK(m5.imag() == doctest::Approx(0.0063662).epsilon(1e-5));
  SeededStream rng(8, 0);
  for (int i = 0; i < 200; ++i) {
    const int k = 1 + static_cast<int>(rng.uniform() * 60);
    const double R = 0.5 * rng.uniform() + 1e-3;
    const cplx a = pde::interaction_multiplier(k, R);
    const cplx o = multiplier_oracle(k, R);
    CHECK(std::abs(a - o) < 1e-12);
    CHECK(pde::interaction_multiplier(-k, R) == -a);
  }
  CHECK(pde::interaction_multiplier(0, 0.2) == cplx(0.0, 0.0));
  // small-kR limit
  const double R = 1e-3;
  CHECK(pde::interaction_multiplier(1, R).imag() == doctest::Approx(4.0 * pi * R * R * R / 3.0).epsilon(1e-6));
}

TEST_CASE("transforms") {
  const int n = 64;
  pde::FourierTransform ft(n);
  std::vector<double> one(n, 1.0);
  auto c = ft.forward(one);
  CHECK(std::abs(c[0] - cplx(1.0, 0.0)) < 1e-15);
  for (std::size_t k = 1; k < c.size(); ++k) CHECK(std::abs(c[k]) < 1e-15);

  std::vector<double> cs(n);
  for (int j = 0; j < n; ++j) cs[j] = std::cos(2.0 * pi * j / n);
  c = ft.forward(cs);
  CHECK(std::abs(c[1] - cplx(0.5, 0.0)) < 1e-15);
  CHECK(std::abs(c[2]) < 1e-15);

  SeededStream rng(4, 0);
  std::vector<double> r(n);
  for (auto& v : r) v = rng.normal();
  const auto back = ft.inverse(ft.forward(r));
  double err = 0.0;
  for (int j = 0; j < n; ++j) err = std::max(err, std::fabs(back[j] - r[j]));
  CHECK(err < 1e-12);
  std::vector<double> wrong(n + 1);
  CHECK_THROWS_WITH(ft.forward(wrong), doctest::Contains("size mismatch"));
}

TEST_CASE("constant density is an exact fixed point") {
  const pde::SpectralSolver solver(params(0.1, 0.02), {});
  auto s = pde::SpectralDensity::uniform(128);
  for (int i = 0; i < 100; ++i) solver.step_in_place(s);
  CHECK(s.coeff(0) == cplx(1.0, 0.0));
  for (int k = 1; k <= 128; ++k) CHECK(s.coeff(k) == cplx(0.0, 0.0));
}

TEST_CASE("mass is bit-constant and the field stays real") {
  const pde::SpectralSolver solver(params(0.1, 0.03), {});
  auto s = pde::make_initial(solver, pde::initial_profile("gaussian(0.3, 20)", 512));
  const cplx m0 = s.coeff(0);
  for (int i = 0; i < 2000; ++i) {
    solver.step_in_place(s);
    REQUIRE(s.coeff(0) == m0);
  }
  CHECK(solver.imaginary_residue(s) < 1e-10);
  CHECK(s.coeff(-3) == std::conj(s.coeff(3)));
}

TEST_CASE("step and step_in_place agree") {
  const pde::SpectralSolver solver(params(0.15, 0.05), {});
  auto a = pde::make_initial(solver, pde::initial_profile("gaussian(0.5, 5)", 512));
  auto b = solver.semi_implicit_step(a);
  solver.step_in_place(a);
  for (int k = 0; k <= 128; ++k) CHECK(a.coeff(k) == b.coeff(k));
}

TEST_CASE("growth rate of mode 3 matches the dispersion relation") {
  const auto p = params(0.1, 0.02);
  const double expected = stability::dispersion_growth_rate(3, 0.1, 0.02);
  CHECK(expected == doctest::Approx(0.0917).epsilon(1e-3));
  const auto g = pde::measure_mode_growth(3, p, {}, 1e-4, 5.0);
  CHECK_FALSE(g.underflow);
  CHECK(g.rate == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("stable modes decay, and everything decays above gamma = 1/3") {
  const auto p = params(0.1, 0.02);
  // f_gamma(2 pi 8 0.1) < 0
  REQUIRE(stability::dispersion_growth_rate(8, 0.1, 0.02) < 0.0);
  CHECK(pde::measure_mode_growth(8, p, {}, 1e-4, 1.0).rate < 0.0);
  const auto hot = params(0.1, std::sqrt(4.0 * 0.001 * 0.4));  // gamma = 0.4
  for (int k = 1; k <= 6; ++k) CHECK(pde::measure_mode_growth(k, hot, {}, 1e-4, 0.5).rate < 0.0);
}

TEST_CASE("halving the time step barely moves a growth rate") {
  const auto p = params(0.1, 0.02);
  pde::SolverConfig fine;
  fine.h = 5e-4;
  const double a = pde::measure_mode_growth(3, p, {}, 1e-4, 2.0).rate;
  const double b = pde::measure_mode_growth(3, p, fine, 1e-4, 2.0).rate;
  CHECK(std::fabs(a - b) / std::fabs(b) < 5e-3);
}

TEST_CASE("a single perturbed mode excites only its harmonics") {
  const pde::SpectralSolver solver(params(0.1, 0.02), {});
  const double eps = 1e-4;
  auto s = pde::SpectralDensity::uniform(128);
  s.set(3, 0.5 * eps);
  for (int i = 0; i < 2000; ++i) solver.step_in_place(s);
  double leak = 0.0;
  for (int k = 1; k <= 128; ++k)
    if (k % 3 != 0) leak = std::max(leak, std::abs(s.coeff(k)));
  CHECK(leak < 1e-8 * eps);
}

TEST_CASE("growth measurement preconditions") {
  const auto p = params(0.1, 0.02);
  CHECK_THROWS_AS(pde::measure_mode_growth(3, p, {}, 1e-2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(pde::measure_mode_growth(0, p, {}, 1e-4, 1.0), std::invalid_argument);
  // strongly damped mode underflows
  const auto hot = params(0.1, 0.5);
  const auto g = pde::measure_mode_growth(40, hot, {}, 1e-4, 10.0);
  CHECK(g.underflow);
  CHECK(g.rate < 0.0);
}

TEST_CASE("initial profiles") {
  const auto g = pde::initial_profile("gaussian(0.5, 20)", 512);
  CHECK(g[256] == doctest::Approx(1.0));
  CHECK(g[0] == doctest::Approx(std::exp(-5.0)));
  const auto a = pde::initial_profile("uniform-plus-noise(0.001, 7)", 512);
  const auto b = pde::initial_profile("uniform-plus-noise(0.001, 7)", 512);
  CHECK(a == b);
  for (double v : a) CHECK(std::fabs(v - 1.0) <= 0.001);
  CHECK_THROWS_AS(pde::initial_profile("sawtooth", 512), std::invalid_argument);
  const pde::SpectralSolver solver(params(0.1, 0.02), {});
  CHECK_THROWS_AS(pde::make_initial(solver, pde::initial_profile("uniform", 256)), std::invalid_argument);
  auto neg = pde::initial_profile("uniform", 512);
  neg[3] = -1.0;
  CHECK_THROWS_AS(pde::make_initial(solver, neg), std::invalid_argument);
}

TEST_CASE("blow-up is reported with the step index") {
  // an enormous time step drives the explicit advection unstable
  pde::SolverConfig c;
  c.h = 50.0;
  const pde::SpectralSolver solver(params(0.2, 0.001), c);
  auto s = pde::make_initial(solver, pde::initial_profile("gaussian(0.5, 400)", 512));
  bool thrown = false;
  try {
    for (int i = 0; i < 10000; ++i) solver.step_in_place(s);
  } catch (const pde::BlowUp& e) {
    thrown = true;
    CHECK(std::string(e.what()).find("blow-up") != std::string::npos);
    CHECK(e.step_index() > 0);
  }
  CHECK(thrown);
}

TEST_CASE("spectral order parameter of the uniform state") {
  const pde::SpectralSolver solver(params(0.1, 0.02), {});
  CHECK(solver.order_parameter(pde::SpectralDensity::uniform(128)) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("evolve records diagnostics") {
  const pde::SpectralSolver solver(params(0.1, 0.02), {});
  auto init = pde::make_initial(solver, pde::initial_profile("gaussian(0.5, 20)", 512));
  const auto res = pde::evolve(solver, init, 1.0, 250);
  REQUIRE(res.series.size() == 5);
  CHECK(res.series.back().t == doctest::Approx(1.0));
  for (const auto& d : res.series) {
    CHECK(d.mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.amplitudes.size() == 8);
  }
  std::ostringstream os;
  pde::write_diagnostics_csv(os, res.series);
  CHECK(os.str().rfind("t,mass,min_rho,amp_k1,amp_k2,amp_k3,amp_k4,amp_k5,amp_k6,amp_k7,amp_k8,n_clusters\n", 0) == 0);
}

}
