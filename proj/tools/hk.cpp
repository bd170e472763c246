// hk: command-line front end for the noisy Hegselmann-Krause lab.
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "hk/core.hpp"
#include "hk/plot.hpp"
#include "hk/rng.hpp"
#include "hk/sde.hpp"
#include "hk/spectral.hpp"
#include "hk/stability.hpp"
#include "hk/steady_state.hpp"
#include "hk/sweep.hpp"
#include "hk/util.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace hk;
using cli::ConfigError;
using cli::RunConfig;

namespace {

// Everything a command produces is built in memory first, so a failing run
// leaves no partial output behind.
struct Outputs {
  std::vector<std::pair<std::string, std::string>> files;
  void add(std::string name, std::string content) { files.emplace_back(std::move(name), std::move(content)); }
};

void write_outputs(const std::string& command, const std::string& dir, const std::string& config_hash,
                   const Outputs& out) {
  fs::create_directories(dir);
  ordered_json manifest;
  manifest["command"] = command;
  manifest["code_version"] = sweep::code_version;
  manifest["config_hash"] = config_hash;
  manifest["files"] = ordered_json::array();
  for (const auto& [name, content] : out.files) {
    std::ofstream f(fs::path(dir) / name, std::ios::binary);
    f << content;
    if (!f) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
    manifest["files"].push_back({{"name", name}, {"bytes", content.size()}, {"fnv1a", util::hex64(util::fnv1a(content))}});
  }
  std::ofstream f(fs::path(dir) / "manifest.json", std::ios::binary);
  f << manifest.dump(2) << '\n';
  if (!f) throw std::runtime_error("cannot write manifest.json");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Values given on the command line; unset ones leave the config alone.
struct Overrides {
  std::string config_path;
  std::string preset;
  std::optional<std::string> out;
  std::optional<std::size_t> N;
  std::optional<double> R, sigma, L, h, T;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> init;
  // sde / pde
  std::optional<std::size_t> record_stride, diag_stride;
  std::optional<int> m, grid;
  std::optional<double> dt;
  bool no_dealias = false;
};

void add_model_flags(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config_path, "JSON run configuration (strict; needs \"version\": 1)");
  app->add_option("--out", o.out, "output directory (default: out)");
  app->add_option("--N", o.N, "agent count [agents]");
  app->add_option("--R", o.R, "confidence radius [length]");
  app->add_option("--sigma", o.sigma, "noise magnitude [length/sqrt(time)]");
  app->add_option("--L", o.L, "domain length [length]");
  app->add_option("--seed", o.seed, "global seed (HK_SEED overrides the config, this flag overrides both)");
}

RunConfig resolve(std::string_view command, const Overrides& o) {
  RunConfig cfg;
  if (!o.config_path.empty() && !o.preset.empty()) throw ConfigError("--config and --preset are exclusive");
  if (!o.config_path.empty()) {
    cfg = cli::parse_config(read_file(o.config_path));
    if (cfg.init.empty()) cfg.init = cli::defaults(command).init;
  } else if (!o.preset.empty()) {
    cfg = cli::preset(command, o.preset);
  } else {
    cfg = cli::defaults(command);
  }
  cli::apply_seed_env(cfg);
  if (o.out) cfg.out = *o.out;
  if (o.N) cfg.model.N = *o.N;
  if (o.R) cfg.model.R = *o.R;
  if (o.sigma) cfg.model.sigma = *o.sigma;
  if (o.L) cfg.model.L = *o.L;
  if (o.h) cfg.model.h = *o.h;
  if (o.seed) cfg.model.seed = *o.seed;
  if (o.T) cfg.T = *o.T;
  if (o.init) cfg.init = *o.init;
  if (o.record_stride) cfg.record_stride = *o.record_stride;
  if (o.diag_stride) cfg.diag_stride = *o.diag_stride;
  if (o.m) cfg.solver.m = *o.m;
  if (o.grid) cfg.solver.grid = *o.grid;
  if (o.dt) cfg.solver.h = *o.dt;
  if (o.no_dealias) cfg.solver.dealias = false;
  if (cfg.record_stride == 0) throw ConfigError("--record-stride: must be >= 1");
  if (cfg.diag_stride == 0) throw ConfigError("--diag-stride: must be >= 1");
  cli::validate(cfg, command);
  return cfg;
}

std::size_t modal(const std::vector<std::size_t>& v) {
  std::map<std::size_t, std::size_t> hist;
  for (auto c : v) ++hist[c];
  std::size_t best = 0, hits = 0;
  for (const auto& [c, n] : hist)
    if (n > hits) {
      best = c;
      hits = n;
    }
  return best;
}

// ---------------------------------------------------------------- sde

int cmd_sde(const RunConfig& cfg) {
  const ModelParams& p = cfg.model;
  SeededStream rng(p.seed, 0);
  const AgentState init = sde::initial_state(cfg.init, p, rng);
  sde::SimulateOptions opt;
  opt.T = cfg.T;
  opt.record_stride = cfg.record_stride;
  const sde::Trajectory traj = sde::simulate(p, init, opt, rng);

  std::vector<std::size_t> counts;
  for (const auto& s : traj.snapshots) counts.push_back(detect_clusters(s.positions, p.R, p.L).size());

  // Modal cluster count in ten equal windows of recorded snapshots (after t=0).
  constexpr std::size_t windows = 10;
  ordered_json per_window = ordered_json::array();
  const std::size_t n_snap = counts.size() > 1 ? counts.size() - 1 : counts.size();
  const std::size_t offset = counts.size() > 1 ? 1 : 0;
  for (std::size_t w = 0; w < windows; ++w) {
    const std::size_t a = offset + w * n_snap / windows, b = offset + (w + 1) * n_snap / windows;
    if (a >= b) continue;
    per_window.push_back(
        {{"t_start", traj.times[a]}, {"t_end", traj.times[b - 1]},
         {"n_clusters", modal(std::vector<std::size_t>(counts.begin() + static_cast<std::ptrdiff_t>(a),
                                                       counts.begin() + static_cast<std::ptrdiff_t>(b)))}});
  }

  const auto& last = traj.snapshots.back();
  const ClusterSet cs = detect_clusters(last.positions, p.R, p.L);
  ordered_json summary;
  summary["t_final"] = last.t;
  summary["Q_final"] = order_parameter(last.positions, p.R, p.L);
  summary["Q_disordered"] = disordered_order_parameter(p.N, p.R, p.L);
  summary["n_clusters"] = cs.size();
  ordered_json widths = ordered_json::array(), centers = ordered_json::array(), sizes = ordered_json::array();
  for (const auto& c : cs.clusters) {
    widths.push_back(c.width);
    centers.push_back(c.center);
    sizes.push_back(c.count());
  }
  summary["cluster_widths"] = widths;
  summary["cluster_centers"] = centers;
  summary["cluster_sizes"] = sizes;
  summary["windows"] = per_window;
  summary["config_hash"] = cfg.hash();

  std::ostringstream csv;
  sde::write_trajectory_csv(csv, traj);
  Outputs out;
  out.add("trajectory.csv", csv.str());
  out.add("summary.json", summary.dump(2) + "\n");
  out.add("config.json", cfg.to_json() + "\n");
  write_outputs("sde", cfg.out, cfg.hash(), out);
  std::cout << "n_clusters " << cs.size() << "  Q_final " << util::fmt_g(summary["Q_final"].get<double>(), 6)
            << "  -> " << cfg.out << "\n";
  return 0;
}

// ---------------------------------------------------------------- pde

std::string shape_of(std::size_t n_clusters, double rel_variation) {
  if (n_clusters == 1) return "single-bump";
  if (n_clusters > 1) return "multi-bump";
  return rel_variation < 0.1 ? "flat" : "unclustered";
}

int cmd_pde(const RunConfig& cfg) {
  const ModelParams& p = cfg.model;
  const pde::SpectralSolver solver(p, cfg.solver);
  const auto samples = pde::initial_profile(cfg.init, cfg.solver.grid, p.L);
  const pde::SpectralDensity init = pde::make_initial(solver, samples);
  const auto rho0 = solver.physical(init);
  const pde::EvolveResult res = pde::evolve(solver, init, cfg.T, cfg.diag_stride);
  const auto rho = solver.physical(res.final_state);

  const auto [mn, mx] = std::minmax_element(rho.begin(), rho.end());
  const double mean = 1.0 / p.L;
  const auto clusters = detect_density_clusters(rho, pde::cluster_level(p.L), p.L);
  ordered_json summary;
  summary["t_final"] = res.final_state.t;
  summary["Q_final"] = solver.order_parameter(res.final_state);
  summary["mass"] = res.series.empty() ? 1.0 : res.series.back().mass;
  summary["min_rho"] = *mn;
  summary["peak_over_mean"] = *mx / mean;
  summary["relative_variation"] = (*mx - *mn) / mean;
  summary["n_clusters"] = clusters.size();
  summary["shape"] = shape_of(clusters.size(), (*mx - *mn) / mean);
  ordered_json cl = ordered_json::array();
  for (const auto& c : clusters)
    cl.push_back({{"center", c.center}, {"width", c.width}, {"mass", c.mass}, {"peak", c.peak}});
  summary["clusters"] = cl;
  summary["config_hash"] = cfg.hash();

  std::ostringstream a, b, d;
  pde::write_density_csv(a, rho0, p.L);
  pde::write_density_csv(b, rho, p.L);
  pde::write_diagnostics_csv(d, res.series);
  Outputs out;
  out.add("density_initial.csv", a.str());
  out.add("density_final.csv", b.str());
  out.add("diagnostics.csv", d.str());
  out.add("summary.json", summary.dump(2) + "\n");
  out.add("config.json", cfg.to_json() + "\n");
  write_outputs("pde", cfg.out, cfg.hash(), out);
  std::cout << summary["shape"].get<std::string>() << "  n_clusters " << clusters.size() << "  -> " << cfg.out
            << "\n";
  return 0;
}

// ---------------------------------------------------------------- stability

struct StabilityFlags {
  std::string out = "out";
  std::vector<double> gammas;
  std::string table_s;
  bool zones = false;
  bool classify = false;
  std::string R, sigma;
  int d = 1;
};

int cmd_stability(const StabilityFlags& f) {
  Outputs out;
  ordered_json meta;
  meta["d"] = f.d;
  const bool report = !f.R.empty() && !f.zones;
  if (f.d < 1) throw ConfigError("--d: must be >= 1");

  if (!f.table_s.empty()) {
    const auto s = util::parse_range(f.table_s);
    const std::vector<double> g = f.gammas.empty() ? std::vector<double>{0.0} : f.gammas;
    for (double x : g)
      if (x < 0.0) throw ConfigError("--gamma: must be >= 0");
    std::ostringstream csv;
    stability::write_f_gamma_csv(csv, s, g);
    out.add("f_gamma.csv", csv.str());
    meta["table_s"] = f.table_s;
    meta["gammas"] = g;
  }
  if (f.zones) {
    if (f.R.empty()) throw ConfigError("--zones needs --R <range>");
    const auto Rs = util::parse_range(f.R);
    for (double r : Rs)
      if (!(r > 0.0 && r <= 0.5)) throw ConfigError("--R: values must be in (0, 0.5]");
    std::ostringstream csv;
    stability::write_zones_csv(csv, Rs);
    out.add("zones.csv", csv.str());
    meta["zones_R"] = f.R;
  }
  if (f.classify && (f.R.empty() || f.sigma.empty())) throw ConfigError("--classify needs --R and --sigma");

  if (report) {
    const auto Rs = util::parse_range(f.R);
    if (Rs.size() != 1) throw ConfigError("--R: give a single value unless --zones is set");
    const double R = Rs.front();
    if (!(R > 0.0 && R <= 0.5)) throw ConfigError("--R: must be in (0, 0.5]");
    ordered_json rep;
    rep["R"] = R;
    rep["sigma_lower"] = stability::critical_sigma_disordered(R, f.d);
    rep["sigma_upper"] = stability::critical_sigma_clustered(R);
    if (!f.sigma.empty()) {
      const auto ss = util::parse_range(f.sigma);
      if (ss.size() != 1 || !(ss.front() > 0.0)) throw ConfigError("--sigma: give a single positive value");
      const double sigma = ss.front();
      const double g = stability::gamma_of(R, sigma);
      rep["sigma"] = sigma;
      rep["gamma"] = g;
      const auto region = stability::classify_phase_region(R, sigma);
      rep["label"] = stability::to_string(region.label);
      try {
        const double s_star = f.d == 1 ? stability::most_unstable_s(g) : stability::most_unstable_s_d(g, f.d);
        rep["s_star"] = s_star;
        rep["k_star"] = s_star / (2.0 * M_PI * R);
      } catch (const stability::NoUnstableMode&) {
        rep["s_star"] = nullptr;
        rep["k_star"] = nullptr;
      }
      if (f.classify) std::cout << rep["label"].get<std::string>() << "\n";
      else std::cout << rep.dump(2) << "\n";
    } else {
      std::cout << rep.dump(2) << "\n";
    }
    out.add("stability.json", rep.dump(2) + "\n");
  }
  if (out.files.empty() && !report)
    throw ConfigError("nothing to do: give --table-s, --zones, or --R/--sigma (see --help)");
  const std::string hash = util::hex64(util::fnv1a(meta.dump() + f.R + "|" + f.sigma));
  write_outputs("stability", f.out, hash, out);
  return 0;
}

// ---------------------------------------------------------------- steady-state

struct SteadyFlags {
  std::string out = "out";
  double R = 0.1;
  std::string sigmas = "0.04,0.02,0.01";
  double y0 = 0.0;
  std::size_t intervals = 2048;
};

int cmd_steady_state(const SteadyFlags& f) {
  if (!(f.R > 0.0 && f.R <= 0.25)) throw ConfigError("--R: must be in (0, 0.25] so the window holds one cluster");
  if (f.intervals < 16 || f.intervals % 2 != 0) throw ConfigError("--intervals: must be even and >= 16");
  const auto sig = util::parse_range(f.sigmas);
  for (double s : sig)
    if (!(s > 0.0)) throw ConfigError("--sigma: values must be > 0");

  const auto xs = steady::residual_grid(f.intervals + 1);
  std::ostringstream k, prof, res;
  steady::write_kernel_slice_csv(k, f.y0, f.R, xs);
  const auto rho = steady::sample_profile_on_window(f.R, sig.front(), f.intervals);
  steady::write_profile_csv(prof, xs, rho);
  std::vector<double> r;
  for (double s : sig) r.push_back(steady::fixed_point_residual(steady::sample_profile_on_window(f.R, s, f.intervals), f.R, s));
  steady::write_residual_csv(res, sig, r);
  for (std::size_t i = 0; i < sig.size(); ++i)
    std::cout << "sigma " << util::fmt_g(sig[i], 6) << "  residual " << util::fmt_g(r[i], 6) << "\n";

  Outputs out;
  out.add("kernel_slice.csv", k.str());
  out.add("profile.csv", prof.str());
  out.add("residual.csv", res.str());
  std::ostringstream key;
  key << f.R << '|' << f.sigmas << '|' << f.y0 << '|' << f.intervals;
  write_outputs("steady-state", f.out, util::hex64(util::fnv1a(key.str())), out);
  return 0;
}

// ---------------------------------------------------------------- sweep

struct SweepFlags {
  std::optional<std::string> R_grid, sigma_grid, engine;
  std::optional<double> T;
  std::optional<std::size_t> replicates;
  int jobs = 0;
  bool svg = false;
  bool timing = false;
};

int cmd_sweep(RunConfig cfg, const SweepFlags& f) {
  try {
    if (f.R_grid) cfg.sweep.R_values = util::parse_range(*f.R_grid);
    if (f.sigma_grid) cfg.sweep.sigma_values = util::parse_range(*f.sigma_grid);
    if (f.engine) cfg.sweep.engine = sweep::engine_from_string(*f.engine);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (f.T) cfg.sweep.T = *f.T;
  if (f.replicates) cfg.sweep.replicates = *f.replicates;
  if (f.timing) cfg.sweep.record_timing = true;
  if (f.jobs < 0) throw ConfigError("--jobs: must be >= 0");
  cli::validate(cfg, "sweep");

  sweep::SweepSpec spec = cfg.sweep;
  spec.base = cfg.model;
  spec.solver = cfg.solver;
  const auto table = sweep::run_sweep(spec, f.jobs);

  std::ostringstream csv;
  sweep::write_table_csv(csv, table);
  ordered_json transitions = ordered_json::array();
  if (spec.sigma_values.size() >= 5) {
    for (double R : spec.R_values) {
      const auto t = sweep::detect_transition(table, R);
      transitions.push_back({{"R", R}, {"sigma_transition", t ? ordered_json(*t) : ordered_json(nullptr)}});
      std::cout << "R " << util::fmt_g(R, 6) << "  transition "
                << (t ? util::fmt_g(*t, 6) : std::string("none")) << "\n";
    }
  }
  ordered_json sidecar = ordered_json::parse(sweep::spec_json(spec));
  sidecar["config_hash"] = cfg.hash();
  sidecar["transitions"] = transitions;

  Outputs out;
  out.add("phase_diagram.csv", csv.str());
  out.add("phase_diagram.json", sidecar.dump(2) + "\n");
  out.add("config.json", cfg.to_json() + "\n");
  if (f.svg) {
    std::istringstream in(csv.str());
    plot::Options opt;
    opt.title = "Q_mean over (R, sigma)";
    opt.metadata = "config_hash=" + cfg.hash();
    out.add("phase_diagram.svg", plot::heatmap_svg(util::read_csv(in), opt));
  }
  write_outputs("sweep", cfg.out, cfg.hash(), out);
  std::cout << table.rows.size() << " cells -> " << cfg.out << "\n";
  return 0;
}

// ---------------------------------------------------------------- plot

struct PlotFlags {
  std::string input;
  std::string kind;
  std::string out = "out";
  std::string output;
  std::string title;
  bool log_time = false;
};

int cmd_plot(const PlotFlags& f) {
  const plot::Kind kind = [&] {
    try {
      return plot::kind_from_string(f.kind);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }();
  const std::string content = read_file(f.input);
  std::istringstream in(content);
  util::CsvTable table;
  try {
    table = util::read_csv(in);
  } catch (const std::exception& e) {
    throw plot::SchemaError(std::string("input: ") + e.what());
  }

  // Provenance: the producing run's config hash, when a manifest sits next to the input.
  std::string meta = "input_fnv1a=" + util::hex64(util::fnv1a(content));
  const fs::path manifest = fs::path(f.input).parent_path() / "manifest.json";
  if (fs::exists(manifest)) {
    try {
      const auto m = nlohmann::json::parse(read_file(manifest.string()));
      if (m.contains("config_hash")) meta = "config_hash=" + m["config_hash"].get<std::string>() + " " + meta;
    } catch (const nlohmann::json::exception&) {
    }
  }
  plot::Options opt;
  opt.log_x = f.log_time;
  opt.title = f.title;
  opt.metadata = meta;
  const std::string svg = plot::render(kind, table, opt);

  const std::string name = f.output.empty() ? fs::path(f.input).stem().string() + ".svg" : f.output;
  Outputs out;
  out.add(name, svg);
  write_outputs("plot", f.out, util::hex64(util::fnv1a(content)), out);
  std::cout << (fs::path(f.out) / name).string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hk: noisy Hegselmann-Krause opinion dynamics on a circle of length L"};
  app.require_subcommand(1);
  app.set_version_flag("--version", sweep::code_version);

  Overrides sde_o, pde_o, sweep_o;
  auto* sde_cmd = app.add_subcommand("sde", "Euler-Maruyama agent simulation; writes trajectory.csv and summary.json");
  add_model_flags(sde_cmd, sde_o);
  sde_cmd->add_option("--preset", sde_o.preset, "merge | disperse");
  sde_cmd->add_option("--dt", sde_o.h, "Euler-Maruyama time step [time]");
  sde_cmd->add_option("--T", sde_o.T, "final time [time]");
  sde_cmd->add_option("--init", sde_o.init, "uniform-random | point(x0) | gaussian(x0, s)  [positions in length]");
  sde_cmd->add_option("--record-stride", sde_o.record_stride, "steps between recorded snapshots [steps]");

  auto* pde_cmd = app.add_subcommand("pde", "pseudo-spectral mean-field density solver; writes density and diagnostics CSVs");
  add_model_flags(pde_cmd, pde_o);
  pde_cmd->add_option("--preset", pde_o.preset, "fig3-left | fig3-middle | fig3-right");
  pde_cmd->add_option("--T", pde_o.T, "final time [time]");
  pde_cmd->add_option("--dt", pde_o.dt, "solver time step [time]");
  pde_cmd->add_option("--m", pde_o.m, "Fourier truncation order [modes]");
  pde_cmd->add_option("--grid", pde_o.grid, "collocation points, power of two [points]");
  pde_cmd->add_flag("--no-dealias", pde_o.no_dealias, "skip the dealiasing truncation");
  pde_cmd->add_option("--init", pde_o.init,
                      "gaussian(c, a) = exp(-a (x-c)^2) | uniform | uniform-plus-noise(eps, seed)  [c in length, a in 1/length^2]");
  pde_cmd->add_option("--diag-stride", pde_o.diag_stride, "steps between diagnostics rows [steps]");

  StabilityFlags st;
  auto* st_cmd = app.add_subcommand("stability", "linear stability tables: f_gamma, critical curves, s*, k*, zones");
  st_cmd->add_option("--out", st.out, "output directory");
  st_cmd->add_option("--gamma", st.gammas, "gamma = sigma^2/(4 R^3) values for --table-s [dimensionless]")->delimiter(',');
  st_cmd->add_option("--table-s", st.table_s, "s grid start:stop:step for f_gamma(s) [dimensionless, s = 2 pi k R / L]");
  st_cmd->add_flag("--zones", st.zones, "tabulate both critical curves over --R");
  st_cmd->add_flag("--classify", st.classify, "print only the phase-region label for --R, --sigma");
  st_cmd->add_option("--R", st.R, "confidence radius, value or start:stop:step range [length]");
  st_cmd->add_option("--sigma", st.sigma, "noise magnitude [length/sqrt(time)]");
  st_cmd->add_option("--d", st.d, "space dimension for the disordered critical curve [1..]");

  SteadyFlags ss;
  auto* ss_cmd = app.add_subcommand("steady-state", "single-cluster steady profile, kernel slice and fixed-point residuals");
  ss_cmd->add_option("--out", ss.out, "output directory");
  ss_cmd->add_option("--R", ss.R, "confidence radius [length]");
  ss_cmd->add_option("--sigma", ss.sigmas, "noise values, list or start:stop:step [length/sqrt(time)]");
  ss_cmd->add_option("--y0", ss.y0, "second argument of the kernel slice K(x, y0) [length]");
  ss_cmd->add_option("--intervals", ss.intervals, "trapezoid intervals on [-1/2, 1/2], even [count]");

  SweepFlags sw;
  auto* sw_cmd = app.add_subcommand("sweep", "parallel (R, sigma) phase-diagram sweep; writes phase_diagram.csv");
  add_model_flags(sw_cmd, sweep_o);
  sw_cmd->add_option("--preset", sweep_o.preset, "ci | transition | pd (pd is overnight-scale: N=300, T=1e5)");
  sw_cmd->add_option("--sde-dt", sweep_o.h, "sde time step [time]");
  sw_cmd->add_option("--pde-dt", sweep_o.dt, "pde solver time step [time]");
  sw_cmd->add_option("--R-grid", sw.R_grid, "R values, start:stop:step or list [length]");
  sw_cmd->add_option("--sigma-grid", sw.sigma_grid, "sigma values, start:stop:step or list [length/sqrt(time)]");
  sw_cmd->add_option("--engine", sw.engine, "sde | pde");
  sw_cmd->add_option("--T", sw.T, "run length per cell [time]");
  sw_cmd->add_option("--replicates", sw.replicates, "independent sde runs per cell [count]");
  sw_cmd->add_option("--jobs", sw.jobs, "worker threads, 0 = OpenMP default [threads]");
  sw_cmd->add_flag("--svg", sw.svg, "also write phase_diagram.svg");
  sw_cmd->add_flag("--timing", sw.timing, "record wall_ms per cell (output no longer byte-reproducible)");

  PlotFlags pl;
  auto* pl_cmd = app.add_subcommand("plot", "render a CSV written by this tool as a static SVG");
  pl_cmd->add_option("--input", pl.input, "input CSV")->required();
  pl_cmd->add_option("--kind", pl.kind, "heatmap | lines | trajectory")->required();
  pl_cmd->add_option("--out", pl.out, "output directory");
  pl_cmd->add_option("--output", pl.output, "SVG file name inside --out (default: <input stem>.svg)");
  pl_cmd->add_option("--title", pl.title, "plot title");
  pl_cmd->add_flag("--log-time", pl.log_time, "logarithmic horizontal axis [time]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*sde_cmd) return cmd_sde(resolve("sde", sde_o));
    if (*pde_cmd) return cmd_pde(resolve("pde", pde_o));
    if (*st_cmd) return cmd_stability(st);
    if (*ss_cmd) return cmd_steady_state(ss);
    if (*sw_cmd) return cmd_sweep(resolve("sweep", sweep_o), sw);
    if (*pl_cmd) return cmd_plot(pl);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const plot::SchemaError& e) {
    std::cerr << "error: schema mismatch: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
