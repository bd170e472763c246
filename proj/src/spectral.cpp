#include "hk/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>
#include <ostream>
#include <string>

#include "hk/rng.hpp"
#include "hk/util.hpp"

namespace hk::pde {

namespace {

constexpr double pi = std::numbers::pi;

// The FFTW planner is not reentrant; plan execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

BlowUp::BlowUp(std::size_t step_index)
    : std::runtime_error("blow-up: non-finite coefficient at step " + std::to_string(step_index)),
      step_(step_index) {}

void SolverConfig::validate() const {
  if (m < 1) throw std::invalid_argument("m: must be >= 1");
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("h: must be > 0");
  if (grid < 2 || !std::has_single_bit(static_cast<unsigned>(grid)))
    throw std::invalid_argument("grid: must be a power of two");
  if (grid < 2 * m + 2) throw std::invalid_argument("grid: must be >= 2m + 2");
  if (dealias && grid < 3 * m + 1)
    throw std::invalid_argument("grid: dealiasing needs grid >= 3m + 1");
}

// ---------------------------------------------------------------------------

SpectralDensity::SpectralDensity(int m, double L) : m_(m), L_(L), coeffs_(m + 1) {
  if (m < 0) throw std::invalid_argument("truncation order must be >= 0");
}

cplx SpectralDensity::coeff(int k) const {
  if (k < -m_ || k > m_) return {};
  return k >= 0 ? coeffs_[k] : std::conj(coeffs_[-k]);
}

void SpectralDensity::set(int k, cplx v) {
  if (k < -m_ || k > m_) throw std::out_of_range("mode outside -m..m");
  if (k == 0) v = {v.real(), 0.0};
  if (k >= 0) coeffs_[k] = v;
  else coeffs_[-k] = std::conj(v);
}

SpectralDensity SpectralDensity::uniform(int m, double L) {
  SpectralDensity s(m, L);
  s.coeffs_[0] = 1.0 / L;
  return s;
}

// ---------------------------------------------------------------------------

struct FourierTransform::Impl {
  int n;
  double* real_buf;
  fftw_complex* spec_buf;
  fftw_complex* full_buf;
  fftw_plan r2c;
  fftw_plan c2r;
  fftw_plan c2c_backward;

  explicit Impl(int size) : n(size) {
    std::lock_guard lock(planner_mutex());
    real_buf = fftw_alloc_real(static_cast<std::size_t>(n));
    spec_buf = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
    full_buf = fftw_alloc_complex(static_cast<std::size_t>(n));
    r2c = fftw_plan_dft_r2c_1d(n, real_buf, spec_buf, FFTW_ESTIMATE);
    c2r = fftw_plan_dft_c2r_1d(n, spec_buf, real_buf, FFTW_ESTIMATE);
    c2c_backward = fftw_plan_dft_1d(n, full_buf, full_buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(r2c);
    fftw_destroy_plan(c2r);
    fftw_destroy_plan(c2c_backward);
    fftw_free(real_buf);
    fftw_free(spec_buf);
    fftw_free(full_buf);
  }
};

FourierTransform::FourierTransform(int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("transform size must be even and >= 2");
  impl_ = std::make_unique<Impl>(n);
}
FourierTransform::~FourierTransform() = default;
FourierTransform::FourierTransform(FourierTransform&&) noexcept = default;
FourierTransform& FourierTransform::operator=(FourierTransform&&) noexcept = default;

int FourierTransform::size() const { return impl_->n; }

void FourierTransform::forward(std::span<const double> samples, std::span<cplx> coeffs) const {
  const int n = impl_->n;
  if (samples.size() != static_cast<std::size_t>(n) ||
      coeffs.size() != static_cast<std::size_t>(n / 2 + 1))
    throw std::invalid_argument("forward transform: size mismatch");
  std::copy(samples.begin(), samples.end(), impl_->real_buf);
  fftw_execute(impl_->r2c);
  const double inv = 1.0 / n;
  for (int k = 0; k <= n / 2; ++k)
    coeffs[k] = cplx(impl_->spec_buf[k][0] * inv, impl_->spec_buf[k][1] * inv);
}

void FourierTransform::inverse(std::span<const cplx> coeffs, std::span<double> samples) const {
  const int n = impl_->n;
  if (samples.size() != static_cast<std::size_t>(n) ||
      coeffs.size() != static_cast<std::size_t>(n / 2 + 1))
    throw std::invalid_argument("inverse transform: size mismatch");
  for (int k = 0; k <= n / 2; ++k) {
    impl_->spec_buf[k][0] = coeffs[k].real();
    impl_->spec_buf[k][1] = coeffs[k].imag();
  }
  fftw_execute(impl_->c2r);
  std::copy(impl_->real_buf, impl_->real_buf + n, samples.begin());
}

std::vector<cplx> FourierTransform::forward(std::span<const double> samples) const {
  std::vector<cplx> out(static_cast<std::size_t>(impl_->n / 2 + 1));
  forward(samples, out);
  return out;
}

std::vector<double> FourierTransform::inverse(std::span<const cplx> coeffs) const {
  std::vector<double> out(static_cast<std::size_t>(impl_->n));
  inverse(coeffs, out);
  return out;
}

// ---------------------------------------------------------------------------

cplx interaction_multiplier(int k, double R, double L) {
  if (k == 0) return {};
  const double q = 2.0 * pi * k / L;  // angular wavenumber
  // int_{-R}^{R} y e^{i q y} dy = 2i [sin(qR)/q^2 - R cos(qR)/q]
  return {0.0, 2.0 * (std::sin(q * R) / (q * q) - R * std::cos(q * R) / q)};
}

double indicator_weight(int k, double R, double L) {
  if (k == 0) return 2.0 * R;
  const double q = 2.0 * pi * k / L;
  return 2.0 * std::sin(q * R) / q;
}

// ---------------------------------------------------------------------------

SpectralSolver::SpectralSolver(const ModelParams& params, const SolverConfig& config)
    : params_(params), config_(config), fft_(config.grid) {
  params_.validate();
  config_.validate();
  const int m = config_.m;
  multiplier_.resize(m + 1);
  implicit_.resize(m + 1);
  for (int k = 0; k <= m; ++k) {
    multiplier_[k] = interaction_multiplier(k, params_.R, params_.L);
    const double q = 2.0 * pi * k / params_.L;
    implicit_[k] = 1.0 + 0.5 * params_.sigma * params_.sigma * q * q * config_.h;
  }
  const auto half = static_cast<std::size_t>(config_.grid / 2 + 1);
  work_a_.assign(half, cplx{});
  work_b_.assign(half, cplx{});
  rho_.assign(static_cast<std::size_t>(config_.grid), 0.0);
  phi_.assign(static_cast<std::size_t>(config_.grid), 0.0);
}

void SpectralSolver::step_in_place(SpectralDensity& s) const {
  const int m = config_.m;
  if (s.m() != m) throw std::invalid_argument("state truncation order does not match solver");
  auto coeffs = s.nonnegative();

  std::fill(work_a_.begin(), work_a_.end(), cplx{});
  std::fill(work_b_.begin(), work_b_.end(), cplx{});
  for (int k = 0; k <= m; ++k) {
    work_a_[k] = coeffs[k];
    work_b_[k] = multiplier_[k] * coeffs[k];
  }
  fft_.inverse(work_a_, rho_);
  fft_.inverse(work_b_, phi_);
  for (std::size_t j = 0; j < rho_.size(); ++j) rho_[j] *= phi_[j];
  fft_.forward(rho_, work_a_);  // psi_hat

  const double h = config_.h;
  for (int k = 1; k <= m; ++k) {
    const double q = 2.0 * pi * k / params_.L;
    const cplx advect = cplx(0.0, -q * h) * work_a_[k];
    coeffs[k] = (coeffs[k] + advect) / implicit_[k];
  }
  // The zero mode has no time derivative: pin the mass.
  coeffs[0] = 1.0 / params_.L;

  ++steps_;
  for (int k = 1; k <= m; ++k)
    if (!std::isfinite(coeffs[k].real()) || !std::isfinite(coeffs[k].imag()))
      throw BlowUp(steps_);
  s.t += h;
}

SpectralDensity SpectralSolver::semi_implicit_step(const SpectralDensity& state) const {
  SpectralDensity next = state;
  step_in_place(next);
  return next;
}

std::vector<double> SpectralSolver::physical(const SpectralDensity& state) const {
  std::vector<cplx> spec(static_cast<std::size_t>(config_.grid / 2 + 1));
  const auto c = state.nonnegative();
  const int upto = std::min(state.m(), config_.grid / 2 - 1);
  for (int k = 0; k <= upto; ++k) spec[k] = c[k];
  return fft_.inverse(spec);
}

SpectralDensity SpectralSolver::project(std::span<const double> samples) const {
  const auto spec = fft_.forward(samples);
  SpectralDensity s(config_.m, params_.L);
  for (int k = 0; k <= config_.m; ++k) s.set(k, spec[k]);
  return s;
}

double SpectralSolver::imaginary_residue(const SpectralDensity& state) const {
  const int n = config_.grid;
  std::vector<cplx> full(static_cast<std::size_t>(n));
  for (int k = -state.m(); k <= state.m(); ++k) full[(k + n) % n] = state.coeff(k);
  // Separate plan: complex backward transform of the full spectrum.
  fftw_complex* buf = nullptr;
  fftw_plan plan = nullptr;
  {
    std::lock_guard lock(planner_mutex());
    buf = fftw_alloc_complex(static_cast<std::size_t>(n));
    plan = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  for (int j = 0; j < n; ++j) {
    buf[j][0] = full[j].real();
    buf[j][1] = full[j].imag();
  }
  fftw_execute(plan);
  double worst = 0.0;
  for (int j = 0; j < n; ++j) worst = std::max(worst, std::fabs(buf[j][1]));
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
    fftw_free(buf);
  }
  return worst;
}

double SpectralSolver::order_parameter(const SpectralDensity& state) const {
  const auto c = state.nonnegative();
  double q = indicator_weight(0, params_.R, params_.L) * std::norm(c[0]);
  for (int k = 1; k <= state.m(); ++k)
    q += 2.0 * indicator_weight(k, params_.R, params_.L) * std::norm(c[k]);
  return q * params_.L;
}

Diagnostics SpectralSolver::diagnose(const SpectralDensity& state) const {
  Diagnostics d;
  d.t = state.t;
  d.mass = state.coeff(0).real() * params_.L;
  const auto rho = physical(state);
  d.min_rho = *std::min_element(rho.begin(), rho.end());
  for (int k = 1; k <= 8; ++k) d.amplitudes.push_back(std::abs(state.coeff(k)));
  d.n_clusters = detect_density_clusters(rho, cluster_level(params_.L), params_.L).size();
  return d;
}

// ---------------------------------------------------------------------------

std::vector<double> initial_profile(std::string_view name, int grid, double L) {
  const auto spec = util::parse_call(name);
  std::vector<double> out(static_cast<std::size_t>(grid));
  const double dx = L / grid;
  if (spec.name == "gaussian") {
    if (spec.args.size() != 2) throw std::invalid_argument("gaussian(center, a) takes two arguments");
    const double c = spec.args[0], a = spec.args[1];
    // Plain (non-periodized) Gaussian over one period centered at c.
    for (int j = 0; j < grid; ++j) {
      const double d = signed_displacement(c, j * dx, L);
      out[j] = std::exp(-a * d * d);
    }
  } else if (spec.name == "uniform") {
    if (!spec.args.empty()) throw std::invalid_argument("uniform takes no arguments");
    std::fill(out.begin(), out.end(), 1.0);
  } else if (spec.name == "uniform-plus-noise") {
    if (spec.args.size() != 2)
      throw std::invalid_argument("uniform-plus-noise(eps, seed) takes two arguments");
    const double eps = spec.args[0];
    if (!(eps >= 0.0 && eps < 1.0)) throw std::invalid_argument("noise amplitude must be in [0, 1)");
    SeededStream rng(static_cast<std::uint64_t>(spec.args[1]), 0);
    for (auto& v : out) v = 1.0 + eps * (2.0 * rng.uniform() - 1.0);
  } else {
    throw std::invalid_argument("unknown profile: " + std::string(name));
  }
  return out;
}

SpectralDensity make_initial(const SpectralSolver& solver, std::span<const double> samples) {
  if (samples.size() != static_cast<std::size_t>(solver.config().grid))
    throw std::invalid_argument("initial samples do not match the solver grid");
  double sum = 0.0;
  for (double v : samples) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("initial density must be nonnegative");
    sum += v;
  }
  if (!(sum > 0.0)) throw std::invalid_argument("initial density has zero mass");
  const double L = solver.params().L;
  const double scale = static_cast<double>(samples.size()) / (sum * L);
  std::vector<double> scaled(samples.begin(), samples.end());
  for (auto& v : scaled) v *= scale;
  SpectralDensity s = solver.project(scaled);
  s.set(0, 1.0 / L);
  return s;
}

EvolveResult evolve(const SpectralSolver& solver, SpectralDensity init, double T,
                    std::size_t diag_stride) {
  if (!(T >= 0.0)) throw std::invalid_argument("T: must be >= 0");
  if (diag_stride < 1) diag_stride = 1;
  const double h = solver.config().h;
  const auto steps = static_cast<std::size_t>(std::ceil(T / h - 1e-9));
  EvolveResult res;
  res.final_state = std::move(init);
  res.final_state.t = 0.0;
  res.series.push_back(solver.diagnose(res.final_state));
  for (std::size_t k = 1; k <= steps; ++k) {
    solver.step_in_place(res.final_state);
    res.final_state.t = static_cast<double>(k) * h;
    if (k % diag_stride == 0 || k == steps) res.series.push_back(solver.diagnose(res.final_state));
  }
  return res;
}

GrowthMeasurement measure_mode_growth(int k, const ModelParams& params, const SolverConfig& config,
                                      double eps, double T_window) {
  if (k < 1 || k > config.m) throw std::invalid_argument("mode outside 1..m");
  if (!(eps > 0.0 && eps <= 1e-3)) throw std::invalid_argument("eps: must be in (0, 1e-3]");
  if (!(T_window > 0.0)) throw std::invalid_argument("T_window: must be > 0");

  SpectralSolver solver(params, config);
  SpectralDensity s = SpectralDensity::uniform(config.m, params.L);
  s.set(k, 0.5 * eps / params.L);  // rho = 1/L + eps cos(2 pi k x / L) / L

  const double a0 = std::abs(s.coeff(k));
  // Below this the mode is indistinguishable from round-off in an O(1) field.
  const double floor = 1e-13 / params.L;
  const auto steps = static_cast<std::size_t>(std::ceil(T_window / config.h - 1e-9));

  double st = 0, sy = 0, stt = 0, sty = 0;
  std::size_t count = 0;
  GrowthMeasurement out;
  auto accumulate = [&](double t, double amp) {
    const double y = std::log(amp);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
    ++count;
  };
  accumulate(0.0, a0);
  for (std::size_t n = 1; n <= steps; ++n) {
    solver.step_in_place(s);
    const double amp = std::abs(s.coeff(k));
    if (amp > 10.0 * a0) throw std::domain_error("amplitude left the linear window (> 10 eps)");
    if (amp < floor) {
      out.underflow = true;
      break;
    }
    accumulate(static_cast<double>(n) * config.h, amp);
  }
  if (count < 2) {
    out.underflow = true;
    out.rate = -std::numeric_limits<double>::infinity();
    return out;
  }
  const double c = static_cast<double>(count);
  out.rate = (c * sty - st * sy) / (c * stt - st * st);
  return out;
}

// ---------------------------------------------------------------------------

void write_density_csv(std::ostream& os, std::span<const double> rho, double L) {
  os << "x,rho\n";
  const double dx = L / static_cast<double>(rho.size());
  for (std::size_t j = 0; j < rho.size(); ++j)
    os << util::fmt_g(static_cast<double>(j) * dx, 9) << ',' << util::fmt_g(rho[j], 12) << '\n';
}

void write_diagnostics_csv(std::ostream& os, std::span<const Diagnostics> series) {
  os << "t,mass,min_rho";
  for (int k = 1; k <= 8; ++k) os << ",amp_k" << k;
  os << ",n_clusters\n";
  for (const auto& d : series) {
    os << util::fmt_g(d.t, 9) << ',' << util::fmt_g(d.mass, 17) << ',' << util::fmt_g(d.min_rho, 12);
    for (double a : d.amplitudes) os << ',' << util::fmt_g(a, 12);
    os << ',' << d.n_clusters << '\n';
  }
}

}  // namespace hk::pde
