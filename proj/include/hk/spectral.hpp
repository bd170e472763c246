// Semi-implicit pseudo-spectral solver for the mean-field Fokker-Planck
// equation on the periodic interval [0, L):
//
//   rho_t = -(rho * phi)_x + (sigma^2 / 2) rho_xx,
//   phi(x) = int_{-R}^{R} y rho(x + y) dy.
//
// Diffusion is implicit, the advective flux explicit. The product
// psi = phi * rho is formed on the collocation grid.
#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "hk/core.hpp"

namespace hk::pde {

using cplx = std::complex<double>;

class BlowUp : public std::runtime_error {
 public:
  BlowUp(std::size_t step_index);
  std::size_t step_index() const { return step_; }

 private:
  std::size_t step_;
};

struct SolverConfig {
  int m = 128;           ///< truncation order: modes -m..m are evolved
  double h = 1e-3;       ///< time step
  bool dealias = true;   ///< requires grid >= 3m + 1
  int grid = 512;        ///< collocation points, power of two

  void validate() const;
};

/// Truncated Fourier series of a real density. Only k = 0..m are stored;
/// rho_{-k} = conj(rho_k) holds by construction.
class SpectralDensity {
 public:
  SpectralDensity() = default;
  SpectralDensity(int m, double L = 1.0);

  int m() const { return m_; }
  double L() const { return L_; }
  double t = 0.0;

  cplx coeff(int k) const;
  /// Sets mode k and, implicitly, its conjugate partner -k.
  void set(int k, cplx v);

  std::span<const cplx> nonnegative() const { return coeffs_; }
  std::span<cplx> nonnegative() { return coeffs_; }

  /// Density with rho(x) = 1/L.
  static SpectralDensity uniform(int m, double L = 1.0);

 private:
  int m_ = 0;
  double L_ = 1.0;
  std::vector<cplx> coeffs_;
};

/// Real-to-complex transform pair on a grid of n points, normalized so that
/// coefficient 0 is the spatial mean of the samples.
class FourierTransform {
 public:
  explicit FourierTransform(int n);
  ~FourierTransform();
  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;
  FourierTransform(FourierTransform&&) noexcept;
  FourierTransform& operator=(FourierTransform&&) noexcept;

  int size() const;

  /// samples (n) -> coefficients k = 0..n/2 (n/2 + 1 values).
  void forward(std::span<const double> samples, std::span<cplx> coeffs) const;
  /// coefficients k = 0..n/2 -> samples (n).
  void inverse(std::span<const cplx> coeffs, std::span<double> samples) const;

  std::vector<cplx> forward(std::span<const double> samples) const;
  std::vector<double> inverse(std::span<const cplx> coeffs) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// m_k = int_{-R}^{R} y exp(i 2 pi k y / L) dy; m_0 = 0. Purely imaginary, odd in k.
cplx interaction_multiplier(int k, double R, double L = 1.0);

/// Fourier weight of the indicator 1{|z| <= R}: int_{-R}^{R} exp(-i 2 pi k z / L) dz.
double indicator_weight(int k, double R, double L = 1.0);

struct Diagnostics {
  double t = 0.0;
  double mass = 0.0;
  double min_rho = 0.0;
  std::vector<double> amplitudes;  ///< |rho_k| for k = 1..8
  std::size_t n_clusters = 0;
};

class SpectralSolver {
 public:
  SpectralSolver(const ModelParams& params, const SolverConfig& config);

  const SolverConfig& config() const { return config_; }
  const ModelParams& params() const { return params_; }

  /// One semi-implicit step. Throws BlowUp on a non-finite coefficient.
  SpectralDensity semi_implicit_step(const SpectralDensity& state) const;
  void step_in_place(SpectralDensity& state) const;

  /// Samples rho at x_j = j L / grid.
  std::vector<double> physical(const SpectralDensity& state) const;
  /// Projects grid samples onto modes |k| <= m without touching the mass.
  SpectralDensity project(std::span<const double> samples) const;

  /// Largest |Im| of the field rebuilt from the full -m..m spectrum by a
  /// complex inverse transform.
  double imaginary_residue(const SpectralDensity& state) const;

  /// Mean-field order parameter int int 1{|x-y| <= R} rho(x) rho(y) dx dy.
  double order_parameter(const SpectralDensity& state) const;

  Diagnostics diagnose(const SpectralDensity& state) const;

  std::size_t steps_taken() const { return steps_; }

 private:
  ModelParams params_;
  SolverConfig config_;
  FourierTransform fft_;
  std::vector<cplx> multiplier_;   // k = 0..m
  std::vector<double> implicit_;   // 1 + 2 pi^2 sigma^2 (k/L)^2 h
  mutable std::vector<cplx> work_a_, work_b_;
  mutable std::vector<double> rho_, phi_;
  mutable std::size_t steps_ = 0;
};

/// Named initial profiles: "gaussian(center, a)" for exp(-a (x - center)^2),
/// "uniform", "uniform-plus-noise(eps, seed)" for 1 + eps U(-1, 1) per point.
/// Returns unnormalized samples on the solver grid.
std::vector<double> initial_profile(std::string_view name, int grid, double L = 1.0);

/// Rescales nonnegative samples to unit mass and projects them.
SpectralDensity make_initial(const SpectralSolver& solver, std::span<const double> samples);

struct EvolveResult {
  SpectralDensity final_state;
  std::vector<Diagnostics> series;
};

/// Steps to time T, recording diagnostics every diag_stride steps (and at
/// the start and end).
EvolveResult evolve(const SpectralSolver& solver, SpectralDensity init, double T,
                    std::size_t diag_stride = 1000);

struct GrowthMeasurement {
  double rate = 0.0;
  bool underflow = false;  ///< amplitude hit round-off; |rate| is a lower bound
};

/// Least-squares slope of log|rho_k(t)| over [0, T_window] starting from
/// rho = 1 + eps cos(2 pi k x / L).
GrowthMeasurement measure_mode_growth(int k, const ModelParams& params, const SolverConfig& config,
                                      double eps, double T_window);

/// Density level above which grid cells count as part of a cluster.
inline double cluster_level(double L = 1.0) { return 2.0 / L; }

void write_density_csv(std::ostream& os, std::span<const double> rho, double L = 1.0);
void write_diagnostics_csv(std::ostream& os, std::span<const Diagnostics> series);

}  // namespace hk::pde
