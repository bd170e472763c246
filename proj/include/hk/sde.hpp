// Finite-N stochastic simulator: Euler-Maruyama on the periodic domain.
#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hk/core.hpp"
#include "hk/kernels.hpp"
#include "hk/rng.hpp"

namespace hk::sde {

/// Raised when |drift| * h reaches L/2 for some agent.
class UnstableStep : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<AgentState> snapshots;
  std::size_t record_stride = 1;
};

/// Deterministic velocity of agent i.
double drift(std::span<const double> positions, std::size_t i, const ModelParams& p);

/// One Euler-Maruyama step: x <- wrap(x + drift h + sigma sqrt(h) xi).
/// Normals are drawn in agent order from rng.
AgentState step(const AgentState& state, const ModelParams& p, SeededStream& rng,
                kernels::Exec exec = kernels::Exec::parallel);

/// Builds an initial state from "uniform-random", "point(x0)" or
/// "gaussian(x0, s)". Random initializers draw from rng.
AgentState initial_state(std::string_view initializer, const ModelParams& p, SeededStream& rng);

struct SimulateOptions {
  double T = 1.0;
  std::size_t record_stride = 100;
  kernels::Exec exec = kernels::Exec::parallel;
};

/// Runs ceil(T/h) steps from init, recording every record_stride steps
/// (step 0 included, and the final step always).
Trajectory simulate(const ModelParams& p, const AgentState& init, const SimulateOptions& opt,
                    SeededStream& rng);

/// Convenience overload: builds the initial state from a named initializer and
/// a stream (seed = p.seed, stream_id = 0).
Trajectory simulate(const ModelParams& p, std::string_view initializer,
                    const SimulateOptions& opt);

/// Writes `t,x0,...,x{N-1}` with 9 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

/// Stationary moments of one cluster of n agents in the linearized model.
struct ClusterMoments {
  std::size_t n = 0;
  double eigen_large = 0.0;  ///< one-fold eigenvalue (1 + n/2N + N/2n) sigma^2
  double eigen_small = 0.0;  ///< (n-1)-fold eigenvalue N sigma^2 / 2n
  double var_ii = 0.0;       ///< per-agent stationary variance
};

ClusterMoments cluster_moment_prediction(std::size_t n, const ModelParams& p);

/// Mean squared circular displacement of agents from their circular mean.
double spread_about_mean(std::span<const double> positions, double L = 1.0);

}  // namespace hk::sde
