// Shared domain types and periodic geometry for the noisy Hegselmann-Krause model.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace hk {

/// Parameters shared by the agent simulator and the mean-field solver.
struct ModelParams {
  std::size_t N = 100;  ///< agent count
  double R = 0.1;       ///< confidence radius, 0 < R <= L/2
  double sigma = 0.05;  ///< noise magnitude, length / sqrt(time)
  double L = 1.0;       ///< domain length
  std::uint64_t seed = 1;
  double h = 1e-2;      ///< time step

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Positions of N agents on the circle [0, L) and the simulation clock.
struct AgentState {
  std::vector<double> positions;
  double t = 0.0;

  std::size_t size() const { return positions.size(); }
};

/// Maps any real into [0, L).
double wrap(double x, double L = 1.0);

/// Signed shortest displacement b - a on the circle, in (-L/2, L/2].
/// An exact antipodal pair resolves to +L/2.
double signed_displacement(double a, double b, double L = 1.0);

/// min(|a-b|, L-|a-b|) after normalizing both inputs modulo L.
double periodic_distance(double a, double b, double L = 1.0);

/// Angular mean of positions on the circle, returned in [0, L).
double circular_mean(std::span<const double> positions, double L = 1.0);

/// Edge density of the communication graph, diagonal included:
/// Q = (1/N^2) * #{(i,j) : |x_i - x_j| <= R}.
double order_parameter(std::span<const double> positions, double R, double L = 1.0);

/// Q expected for i.i.d. uniform positions: 1/N + (1 - 1/N) * 2R/L.
double disordered_order_parameter(std::size_t N, double R, double L = 1.0);

struct Cluster {
  std::vector<std::size_t> members;  ///< agent indices, ascending
  double center = 0.0;               ///< circular mean of members
  double width = 0.0;                ///< arc length from first to last member
  std::size_t count() const { return members.size(); }
};

struct ClusterSet {
  std::vector<Cluster> clusters;  ///< ordered by center
  double gap_threshold = 0.0;

  std::size_t size() const { return clusters.size(); }
};

/// Sorts agents around the circle and cuts wherever the circular gap to the
/// next agent exceeds gap_threshold. With no such gap, returns one cluster
/// spanning the whole circle.
ClusterSet detect_clusters(std::span<const double> positions, double gap_threshold,
                           double L = 1.0);

/// Cluster found in a sampled density field.
struct DensityCluster {
  double center = 0.0;  ///< density-weighted circular mean
  double width = 0.0;   ///< extent of the supra-threshold run
  double mass = 0.0;    ///< integral of the density over the run
  double peak = 0.0;
};

/// Maximal circular runs of grid cells with rho > level. Samples are taken at
/// x_j = j L / n. A field with no cell above level yields no clusters.
std::vector<DensityCluster> detect_density_clusters(std::span<const double> rho, double level,
                                                    double L = 1.0);

}  // namespace hk
