// Parallel (R, sigma) parameter sweeps producing phase-diagram tables.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hk/core.hpp"
#include "hk/spectral.hpp"

namespace hk::sweep {

enum class Engine { sde, pde };

std::string_view to_string(Engine e);
Engine engine_from_string(std::string_view s);

struct SweepSpec {
  std::vector<double> R_values;
  std::vector<double> sigma_values;
  Engine engine = Engine::sde;
  ModelParams base;               ///< N, L, h and the global seed; R and sigma are per cell
  pde::SolverConfig solver;       ///< used by the pde engine
  double T = 2000.0;
  double window_fraction = 0.25;  ///< trailing share of [0, T] that is averaged
  double sample_interval = 1.0;   ///< time between order-parameter samples
  std::size_t replicates = 1;     ///< sde only
  std::string initializer;        ///< empty: engine default
  bool record_timing = false;     ///< wall_ms stays 0 unless set, keeping output reproducible

  void validate() const;
};

struct PhaseRow {
  double R = 0.0;
  double sigma = 0.0;
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  double Q_mean = 0.0;
  double Q_std = 0.0;
  std::size_t n_clusters = 0;
  std::string phase_label;
  bool failed = false;
  double wall_ms = 0.0;
};

struct PhaseDiagramTable {
  Engine engine = Engine::sde;
  std::size_t N = 0;
  double L = 1.0;
  std::vector<PhaseRow> rows;  ///< R-major, then sigma, then replicate
};

/// Seed of one cell; independent of grid ordering and worker count.
std::uint64_t cell_seed(std::uint64_t global_seed, std::size_t R_index, std::size_t sigma_index,
                        std::size_t replicate);

/// Runs one cell. Exposed for testing; run_sweep calls it for every cell.
PhaseRow run_cell(const SweepSpec& spec, std::size_t R_index, std::size_t sigma_index,
                  std::size_t replicate);

/// Runs all cells on up to `jobs` OpenMP threads (0: runtime default).
PhaseDiagramTable run_sweep(const SweepSpec& spec, int jobs = 0);

/// Q of the disordered state for this table's engine.
double disordered_reference(const PhaseDiagramTable& table, double R);

/// sigma where Q_mean (replicates averaged) first drops below the midpoint
/// between 1 and the disordered reference, by linear interpolation. Empty
/// when no such crossing exists. Needs >= 5 sigma values at R.
std::optional<double> detect_transition(const PhaseDiagramTable& table, double R);

void write_table_csv(std::ostream& os, const PhaseDiagramTable& table);
/// Sidecar metadata: full spec plus code version.
std::string spec_json(const SweepSpec& spec);

inline constexpr const char* code_version = "1.0.0";

}  // namespace hk::sweep
