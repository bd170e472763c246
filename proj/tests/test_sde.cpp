#include <doctest.h>

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hk/sde.hpp"

using namespace hk;

TEST_SUITE("sde") {

TEST_CASE("two agents contract geometrically without noise") {
  ModelParams p;
  p.N = 2;
  p.R = 0.2;
  p.sigma = 0.0;
  AgentState s{{0.4, 0.5}, 0.0};
  SeededStream rng(1, 0);
  sde::SimulateOptions opt;
  opt.T = 1.0;
  opt.record_stride = 1000;
  const auto traj = sde::simulate(p, s, opt, rng);
  const auto& x = traj.snapshots.back().positions;
  // d_{k+1} = (1 - h) d_k
  CHECK(signed_displacement(x[0], x[1]) == doctest::Approx(0.1 * std::pow(0.99, 100)).epsilon(1e-12));
  CHECK(0.5 * (x[0] + x[1]) == doctest::Approx(0.45).epsilon(1e-12));
}

TEST_CASE("agents beyond R do not interact") {
  ModelParams p;
  p.N = 2;
  p.R = 0.1;
  p.sigma = 0.0;
  AgentState s{{0.2, 0.7}, 0.0};
  SeededStream rng(1, 0);
  const auto next = sde::step(s, p, rng);
  CHECK(next.positions == s.positions);
}

TEST_CASE("free noise increments are Gaussian with variance sigma^2 h") {
  ModelParams p;
  p.N = 1;
  p.sigma = 0.05;
  SeededStream rng(17, 0);
  AgentState s{{0.5}, 0.0};
  const int n = 20000;
  std::vector<double> z(n);
  const double scale = p.sigma * std::sqrt(p.h);
  for (int i = 0; i < n; ++i) {
    const auto next = sde::step(s, p, rng);
    z[i] = signed_displacement(s.positions[0], next.positions[0]) / scale;
    s = next;
  }
  std::sort(z.begin(), z.end());
  const boost::math::normal_distribution<double> nd;
  double D = 0.0;
  for (int i = 0; i < n; ++i) {
    const double F = boost::math::cdf(nd, z[i]);
    D = std::max({D, F - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - F});
  }
  // asymptotic critical value at the 0.1% level
  CHECK(D < 1.95 / std::sqrt(static_cast<double>(n)));
  double m2 = 0.0;
  for (double v : z) m2 += v * v;
  CHECK(m2 / n == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("positions stay in [0, L) after every step") {
  ModelParams p;
  p.N = 50;
  p.sigma = 0.3;
  p.L = 2.0;
  p.R = 0.3;
  const auto traj = sde::simulate(p, "uniform-random", {5.0, 1, kernels::Exec::serial});
  for (const auto& s : traj.snapshots)
    for (double x : s.positions) {
      CHECK(x >= 0.0);
      CHECK(x < p.L);
    }
}

TEST_CASE("unstable step is reported") {
  ModelParams p;
  p.N = 2;
  p.R = 0.5;
  p.h = 3.0;
  p.sigma = 0.0;
  AgentState s{{0.0, 0.4}, 0.0};
  SeededStream rng(1, 0);
  CHECK_THROWS_AS(sde::step(s, p, rng), sde::UnstableStep);
}

TEST_CASE("recording schedule and clock") {
  ModelParams p;
  p.N = 5;
  const auto traj = sde::simulate(p, "uniform-random", {1.0, 30, kernels::Exec::serial});
  REQUIRE(traj.times.size() == 5);
  CHECK(traj.times[1] == doctest::Approx(0.3));
  CHECK(traj.times.back() == doctest::Approx(1.0));
  CHECK(traj.snapshots.back().t == traj.times.back());
}

TEST_CASE("same seed, same trajectory; exec mode does not matter") {
  ModelParams p;
  p.N = 600;  // above the parallel threshold
  p.seed = 4;
  const auto a = sde::simulate(p, "uniform-random", {0.5, 10, kernels::Exec::serial});
  const auto b = sde::simulate(p, "uniform-random", {0.5, 10, kernels::Exec::parallel});
  REQUIRE(a.snapshots.size() == b.snapshots.size());
  for (std::size_t i = 0; i < a.snapshots.size(); ++i) CHECK(a.snapshots[i].positions == b.snapshots[i].positions);
  p.seed = 5;
  const auto c = sde::simulate(p, "uniform-random", {0.5, 10, kernels::Exec::serial});
  CHECK(c.snapshots.back().positions != a.snapshots.back().positions);
}

TEST_CASE("initializers") {
  ModelParams p;
  p.N = 200;
  SeededStream rng(2, 0);
  const auto pt = sde::initial_state("point(1.25)", p, rng);
  for (double x : pt.positions) CHECK(x == doctest::Approx(0.25));
  const auto g = sde::initial_state("gaussian(0.5, 0.01)", p, rng);
  CHECK(sde::spread_about_mean(g.positions) == doctest::Approx(1e-4).epsilon(0.3));
  CHECK_THROWS_AS(sde::initial_state("lattice", p, rng), std::invalid_argument);
  CHECK_THROWS_AS(sde::initial_state("point()", p, rng), std::invalid_argument);
}

TEST_CASE("cluster moment prediction") {
  ModelParams p;
  p.N = 100;
  p.sigma = 0.05;
  const auto m = sde::cluster_moment_prediction(100, p);
  CHECK(m.eigen_small == doctest::Approx(p.sigma * p.sigma / 2));
  CHECK(m.eigen_large == doctest::Approx(2.0 * p.sigma * p.sigma));
  CHECK_THROWS_AS(sde::cluster_moment_prediction(101, p), std::invalid_argument);
}

TEST_CASE("trajectory csv header") {
  ModelParams p;
  p.N = 3;
  const auto traj = sde::simulate(p, "uniform-random", {0.02, 1, kernels::Exec::serial});
  std::ostringstream os;
  sde::write_trajectory_csv(os, traj);
  CHECK(os.str().rfind("t,x0,x1,x2\n0,", 0) == 0);
}

}
