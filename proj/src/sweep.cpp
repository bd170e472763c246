#include "hk/sweep.hpp"

#include <json.hpp>
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>

#include "hk/rng.hpp"
#include "hk/sde.hpp"
#include "hk/stability.hpp"
#include "hk/util.hpp"

namespace hk::sweep {

std::string_view to_string(Engine e) { return e == Engine::sde ? "sde" : "pde"; }

Engine engine_from_string(std::string_view s) {
  if (s == "sde") return Engine::sde;
  if (s == "pde") return Engine::pde;
  throw std::invalid_argument("engine: expected 'sde' or 'pde'");
}

void SweepSpec::validate() const {
  auto increasing = [](const std::vector<double>& v) {
    return !v.empty() && std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
  };
  if (!increasing(R_values)) throw std::invalid_argument("R_values: must be nonempty and strictly increasing");
  if (!increasing(sigma_values))
    throw std::invalid_argument("sigma_values: must be nonempty and strictly increasing");
  if (!(window_fraction > 0.0 && window_fraction <= 1.0))
    throw std::invalid_argument("window_fraction: must be in (0, 1]");
  if (!(T > 0.0)) throw std::invalid_argument("T: must be > 0");
  if (!(sample_interval > 0.0)) throw std::invalid_argument("sample_interval: must be > 0");
  if (replicates < 1) throw std::invalid_argument("replicates: must be >= 1");
  if (engine == Engine::pde && replicates != 1)
    throw std::invalid_argument("replicates: the pde engine is deterministic, use 1");
  for (double R : R_values) {
    ModelParams p = base;
    p.R = R;
    p.sigma = sigma_values.front();
    p.validate();
  }
  if (engine == Engine::pde) solver.validate();
}

std::uint64_t cell_seed(std::uint64_t global_seed, std::size_t R_index, std::size_t sigma_index,
                        std::size_t replicate) {
  return derive_seed(global_seed, {R_index, sigma_index, replicate});
}

namespace {

struct Accumulator {
  std::vector<double> q;
  std::map<std::size_t, std::size_t> cluster_hist;

  void add(double qv, std::size_t clusters) {
    q.push_back(qv);
    ++cluster_hist[clusters];
  }
  void finish(PhaseRow& row) const {
    if (q.empty()) return;
    double mean = 0.0;
    for (double v : q) mean += v;
    mean /= static_cast<double>(q.size());
    double var = 0.0;
    for (double v : q) var += (v - mean) * (v - mean);
    row.Q_mean = mean;
    row.Q_std = std::sqrt(var / static_cast<double>(q.size()));
    // Modal count; ties resolve to the smaller count.
    std::size_t best = 0, best_n = 0;
    for (const auto& [count, hits] : cluster_hist)
      if (hits > best_n) {
        best = count;
        best_n = hits;
      }
    row.n_clusters = best;
  }
};

void run_sde_cell(const SweepSpec& spec, const ModelParams& p, PhaseRow& row) {
  SeededStream rng(p.seed, 0);
  const std::string init = spec.initializer.empty() ? "uniform-random" : spec.initializer;
  AgentState state = sde::initial_state(init, p, rng);
  const auto steps = static_cast<std::size_t>(std::ceil(spec.T / p.h - 1e-9));
  const auto stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(spec.sample_interval / p.h)));
  const double window_start = (1.0 - spec.window_fraction) * spec.T;

  Accumulator acc;
  for (std::size_t k = 1; k <= steps; ++k) {
    state = sde::step(state, p, rng, kernels::Exec::serial);
    const double t = static_cast<double>(k) * p.h;
    if ((k % stride == 0 || k == steps) && t >= window_start - 1e-9) {
      const auto pairs = kernels::pair_count_serial(state.positions, p.R, p.L);
      const double n = static_cast<double>(p.N);
      acc.add(static_cast<double>(pairs) / (n * n), detect_clusters(state.positions, p.R, p.L).size());
    }
  }
  acc.finish(row);
}

void run_pde_cell(const SweepSpec& spec, const ModelParams& p, PhaseRow& row) {
  const pde::SpectralSolver solver(p, spec.solver);
  const std::string init = spec.initializer.empty()
                               ? "uniform-plus-noise(0.001, " + std::to_string(p.seed % (1ULL << 52)) + ")"
                               : spec.initializer;
  pde::SpectralDensity state =
      pde::make_initial(solver, pde::initial_profile(init, spec.solver.grid, p.L));
  const double h = spec.solver.h;
  const auto steps = static_cast<std::size_t>(std::ceil(spec.T / h - 1e-9));
  const auto stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(spec.sample_interval / h)));
  const double window_start = (1.0 - spec.window_fraction) * spec.T;

  Accumulator acc;
  for (std::size_t k = 1; k <= steps; ++k) {
    solver.step_in_place(state);
    const double t = static_cast<double>(k) * h;
    if ((k % stride == 0 || k == steps) && t >= window_start - 1e-9) {
      const auto rho = solver.physical(state);
      acc.add(solver.order_parameter(state),
              detect_density_clusters(rho, pde::cluster_level(p.L), p.L).size());
    }
  }
  acc.finish(row);
}

}  // namespace

PhaseRow run_cell(const SweepSpec& spec, std::size_t R_index, std::size_t sigma_index,
                  std::size_t replicate) {
  PhaseRow row;
  row.R = spec.R_values.at(R_index);
  row.sigma = spec.sigma_values.at(sigma_index);
  row.replicate = replicate;
  row.seed = cell_seed(spec.base.seed, R_index, sigma_index, replicate);
  row.phase_label = std::string(stability::to_string(stability::classify_phase_region(row.R, row.sigma).label));

  ModelParams p = spec.base;
  p.R = row.R;
  p.sigma = row.sigma;
  p.seed = row.seed;

  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (spec.engine == Engine::sde) run_sde_cell(spec, p, row);
    else run_pde_cell(spec, p, row);
  } catch (const sde::UnstableStep&) {
    row.failed = true;
  } catch (const pde::BlowUp&) {
    row.failed = true;
  }
  if (spec.record_timing)
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

PhaseDiagramTable run_sweep(const SweepSpec& spec, int jobs) {
  spec.validate();
  PhaseDiagramTable table;
  table.engine = spec.engine;
  table.N = spec.base.N;
  table.L = spec.base.L;

  const std::size_t nR = spec.R_values.size(), nS = spec.sigma_values.size();
  const std::size_t reps = spec.replicates;
  const auto cells = static_cast<std::ptrdiff_t>(nR * nS * reps);
  table.rows.resize(static_cast<std::size_t>(cells));

  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::ptrdiff_t c = 0; c < cells; ++c) {
    const auto idx = static_cast<std::size_t>(c);
    const std::size_t rep = idx % reps;
    const std::size_t is = (idx / reps) % nS;
    const std::size_t ir = idx / (reps * nS);
    table.rows[idx] = run_cell(spec, ir, is, rep);
  }
  return table;
}

double disordered_reference(const PhaseDiagramTable& table, double R) {
  if (table.engine == Engine::pde) return 2.0 * R / table.L;
  return disordered_order_parameter(table.N, R, table.L);
}

std::optional<double> detect_transition(const PhaseDiagramTable& table, double R) {
  std::map<double, std::pair<double, int>> by_sigma;
  for (const auto& row : table.rows) {
    if (std::fabs(row.R - R) > 1e-12 || row.failed) continue;
    auto& [sum, n] = by_sigma[row.sigma];
    sum += row.Q_mean;
    ++n;
  }
  if (by_sigma.size() < 5) throw std::invalid_argument("detect_transition: need >= 5 sigma values at this R");

  const double mid = 0.5 * (1.0 + disordered_reference(table, R));
  std::vector<std::pair<double, double>> pts;
  for (const auto& [s, acc] : by_sigma) pts.emplace_back(s, acc.first / acc.second);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const auto [s0, q0] = pts[i - 1];
    const auto [s1, q1] = pts[i];
    if (q0 >= mid && q1 < mid) return s0 + (q0 - mid) / (q0 - q1) * (s1 - s0);
  }
  return std::nullopt;
}

void write_table_csv(std::ostream& os, const PhaseDiagramTable& table) {
  os << "R,sigma,replicate,seed,Q_mean,Q_std,n_clusters,phase_label,failed,wall_ms\n";
  for (const auto& r : table.rows) {
    os << util::fmt_g(r.R, 9) << ',' << util::fmt_g(r.sigma, 9) << ',' << r.replicate << ',' << r.seed << ','
       << util::fmt_g(r.Q_mean, 12) << ',' << util::fmt_g(r.Q_std, 12) << ',' << r.n_clusters << ','
       << r.phase_label << ',' << (r.failed ? 1 : 0) << ',' << util::fmt_g(r.wall_ms, 6) << '\n';
  }
}

std::string spec_json(const SweepSpec& spec) {
  nlohmann::ordered_json j;
  j["code_version"] = code_version;
  j["engine"] = to_string(spec.engine);
  j["R_values"] = spec.R_values;
  j["sigma_values"] = spec.sigma_values;
  j["model"] = {{"N", spec.base.N}, {"L", spec.base.L}, {"h", spec.base.h}, {"seed", spec.base.seed}};
  j["solver"] = {{"m", spec.solver.m}, {"h", spec.solver.h}, {"grid", spec.solver.grid},
                 {"dealias", spec.solver.dealias}};
  j["T"] = spec.T;
  j["window_fraction"] = spec.window_fraction;
  j["sample_interval"] = spec.sample_interval;
  j["replicates"] = spec.replicates;
  j["initializer"] = spec.initializer;
  j["record_timing"] = spec.record_timing;
  return j.dump(2);
}

}  // namespace hk::sweep
