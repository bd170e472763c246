#include "hk/sde.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "hk/util.hpp"

namespace hk::sde {

double drift(std::span<const double> positions, std::size_t i, const ModelParams& p) {
  if (i >= positions.size()) throw std::out_of_range("agent index");
  const double xi = positions[i];
  double acc = 0.0;
  for (double xj : positions) {
    const double d = signed_displacement(xi, xj, p.L);
    if (std::fabs(d) <= p.R) acc += d;
  }
  return acc / static_cast<double>(positions.size());
}

AgentState step(const AgentState& state, const ModelParams& p, SeededStream& rng,
                kernels::Exec exec) {
  const std::size_t n = state.size();
  std::vector<double> v(n);
  kernels::drift(exec, state.positions, p.R, p.L, v);

  const double half = 0.5 * p.L;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(std::fabs(v[i]) * p.h < half))
      throw UnstableStep("unstable step: |drift| * h >= L/2 for agent " + std::to_string(i));
  }

  AgentState next;
  next.positions.resize(n);
  const double amp = p.sigma * std::sqrt(p.h);
  for (std::size_t i = 0; i < n; ++i) {
    const double noise = amp > 0.0 ? amp * rng.normal() : 0.0;
    next.positions[i] = wrap(state.positions[i] + v[i] * p.h + noise, p.L);
  }
  next.t = state.t + p.h;
  return next;
}

AgentState initial_state(std::string_view initializer, const ModelParams& p, SeededStream& rng) {
  const auto spec = util::parse_call(initializer);
  AgentState s;
  s.positions.resize(p.N);
  if (spec.name == "uniform-random" || spec.name == "uniform") {
    if (!spec.args.empty()) throw std::invalid_argument("uniform-random takes no arguments");
    for (auto& x : s.positions) x = wrap(rng.uniform() * p.L, p.L);
  } else if (spec.name == "point") {
    if (spec.args.size() != 1) throw std::invalid_argument("point(x0) takes one argument");
    for (auto& x : s.positions) x = wrap(spec.args[0], p.L);
  } else if (spec.name == "gaussian") {
    if (spec.args.size() != 2) throw std::invalid_argument("gaussian(x0, s) takes two arguments");
    for (auto& x : s.positions) x = wrap(spec.args[0] + spec.args[1] * rng.normal(), p.L);
  } else {
    throw std::invalid_argument("unknown initializer: " + std::string(initializer));
  }
  return s;
}

Trajectory simulate(const ModelParams& p, const AgentState& init, const SimulateOptions& opt,
                    SeededStream& rng) {
  p.validate();
  if (!(opt.T > 0.0)) throw std::invalid_argument("T: must be > 0");
  if (opt.record_stride < 1) throw std::invalid_argument("record_stride: must be >= 1");
  if (init.size() != p.N) throw std::invalid_argument("initial state size does not match N");

  const auto steps = static_cast<std::size_t>(std::ceil(opt.T / p.h - 1e-9));
  Trajectory traj;
  traj.record_stride = opt.record_stride;

  AgentState cur = init;
  cur.t = 0.0;
  for (auto& x : cur.positions) x = wrap(x, p.L);
  traj.times.push_back(0.0);
  traj.snapshots.push_back(cur);

  for (std::size_t k = 1; k <= steps; ++k) {
    cur = step(cur, p, rng, opt.exec);
    // Recompute the clock from the step index to avoid accumulated round-off.
    cur.t = static_cast<double>(k) * p.h;
    if (k % opt.record_stride == 0 || k == steps) {
      traj.times.push_back(cur.t);
      traj.snapshots.push_back(cur);
    }
  }
  return traj;
}

Trajectory simulate(const ModelParams& p, std::string_view initializer,
                    const SimulateOptions& opt) {
  p.validate();
  SeededStream rng(p.seed, 0);
  const AgentState init = initial_state(initializer, p, rng);
  return simulate(p, init, opt, rng);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << 't';
  const std::size_t n = traj.snapshots.empty() ? 0 : traj.snapshots.front().size();
  for (std::size_t i = 0; i < n; ++i) os << ",x" << i;
  os << '\n';
  for (std::size_t r = 0; r < traj.snapshots.size(); ++r) {
    os << util::fmt_g(traj.times[r], 9);
    for (double x : traj.snapshots[r].positions) os << ',' << util::fmt_g(x, 9);
    os << '\n';
  }
}

ClusterMoments cluster_moment_prediction(std::size_t n, const ModelParams& p) {
  if (n < 1 || n > p.N) throw std::invalid_argument("cluster size n outside [1, N]");
  if (!(p.sigma > 0.0)) throw std::invalid_argument("sigma: must be > 0");
  const double N = static_cast<double>(p.N);
  const double nn = static_cast<double>(n);
  const double s2 = p.sigma * p.sigma;
  ClusterMoments m;
  m.n = n;
  m.eigen_large = (1.0 + nn / (2.0 * N) + N / (2.0 * nn)) * s2;
  m.eigen_small = N * s2 / (2.0 * nn);
  // (Sigma Sigma^T)_ii with Sigma = I + (1/N) 11^T restricted to n agents.
  const double diag = (1.0 + 1.0 / N) * (1.0 + 1.0 / N) + (nn - 1.0) / (N * N);
  m.var_ii = m.eigen_small * diag;
  return m;
}

double spread_about_mean(std::span<const double> positions, double L) {
  if (positions.empty()) return 0.0;
  const double c = circular_mean(positions, L);
  double acc = 0.0;
  for (double x : positions) {
    const double d = signed_displacement(c, x, L);
    acc += d * d;
  }
  return acc / static_cast<double>(positions.size());
}

}  // namespace hk::sde
