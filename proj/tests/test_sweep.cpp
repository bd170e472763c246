#include <doctest.h>

#include <sstream>

#include "hk/stability.hpp"
#include "hk/sweep.hpp"
#include "hk/util.hpp"

using namespace hk;

namespace {
sweep::SweepSpec small_spec() {
  sweep::SweepSpec s;
  s.R_values = {0.1, 0.3};
  s.sigma_values = {0.01, 0.1, 0.3};
  s.base.N = 40;
  s.base.seed = 3;
  s.T = 20.0;
  s.replicates = 2;
  return s;
}

std::string csv(const sweep::PhaseDiagramTable& t) {
  std::ostringstream os;
  sweep::write_table_csv(os, t);
  return os.str();
}
}  // namespace

TEST_SUITE("sweep") {

TEST_CASE("sweep settings validation") {
  auto s = small_spec();
  CHECK_NOTHROW(s.validate());
  s.sigma_values = {0.1, 0.1};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = small_spec();
  s.window_fraction = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = small_spec();
  s.R_values = {};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = small_spec();
  s.engine = sweep::Engine::pde;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);  // replicates
}

TEST_CASE("rows are ordered and complete") {
  const auto t = sweep::run_sweep(small_spec(), 1);
  REQUIRE(t.rows.size() == 12);
  CHECK(t.rows[0].R == 0.1);
  CHECK(t.rows[0].sigma == 0.01);
  CHECK(t.rows[1].replicate == 1);
  CHECK(t.rows[11].R == 0.3);
  CHECK(t.rows[11].sigma == 0.3);
  for (const auto& r : t.rows) {
    CHECK(r.Q_mean >= 0.0);
    CHECK(r.Q_mean <= 1.0);
    CHECK(r.wall_ms == 0.0);
    CHECK(r.seed == sweep::cell_seed(3, r.R == 0.1 ? 0 : 1, r.sigma == 0.01 ? 0 : (r.sigma == 0.1 ? 1 : 2), r.replicate));
    CHECK(r.phase_label == stability::to_string(stability::classify_phase_region(r.R, r.sigma).label));
  }
  CHECK(t.rows[0].seed != t.rows[1].seed);
}

TEST_CASE("results do not depend on the worker count") {
  const auto spec = small_spec();
  const auto a = csv(sweep::run_sweep(spec, 1));
  CHECK(csv(sweep::run_sweep(spec, 3)) == a);
  CHECK(csv(sweep::run_sweep(spec, 1)) == a);
}

TEST_CASE("a cell does not depend on the rest of the grid") {
  auto spec = small_spec();
  const auto full = sweep::run_sweep(spec, 2);
  const auto cell = sweep::run_cell(spec, 1, 2, 1);
  CHECK(cell.Q_mean == full.rows[11].Q_mean);
  CHECK(cell.seed == full.rows[11].seed);
}

TEST_CASE("csv header") {
  const auto t = sweep::run_sweep(small_spec(), 1);
  CHECK(csv(t).rfind("R,sigma,replicate,seed,Q_mean,Q_std,n_clusters,phase_label,failed,wall_ms\n", 0) == 0);
  const auto j = sweep::spec_json(small_spec());
  CHECK(j.find("\"code_version\"") != std::string::npos);
}

TEST_CASE("failed cells are flagged and the sweep continues") {
  auto spec = small_spec();
  spec.base.h = 3.0;  // |drift| h reaches L/2
  spec.R_values = {0.5};
  spec.sigma_values = {0.0};
  spec.replicates = 1;
  spec.initializer = "gaussian(0.5, 0.2)";
  const auto t = sweep::run_sweep(spec, 1);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0].failed);
}

TEST_CASE("detect_transition on a synthetic table") {
  sweep::PhaseDiagramTable t;
  t.N = 100;
  const double R = 0.1;
  const double ref = sweep::disordered_reference(t, R);
  const auto sig = util::linspace(0.01, 0.1, 10);
  for (double s : sig) {
    sweep::PhaseRow r;
    r.R = R;
    r.sigma = s;
    r.Q_mean = 1.0 - (1.0 - ref) * s / 0.1;  // crosses the midpoint at 0.05
    t.rows.push_back(r);
  }
  const auto tr = sweep::detect_transition(t, R);
  REQUIRE(tr.has_value());
  CHECK(*tr == doctest::Approx(0.05).epsilon(1e-9));

  for (auto& r : t.rows) r.Q_mean = ref;
  CHECK_FALSE(sweep::detect_transition(t, R).has_value());
  t.rows.resize(4);
  CHECK_THROWS_AS(sweep::detect_transition(t, R), std::invalid_argument);
}

TEST_CASE("clustered and disordered reference cells" * doctest::timeout(300)) {
  sweep::SweepSpec s;
  s.base.N = 100;
  s.T = 500.0;
  s.R_values = {0.3};
  s.sigma_values = {0.01};
  CHECK(sweep::run_sweep(s).rows[0].Q_mean > 0.9);
  s.R_values = {0.05};
  s.sigma_values = {0.3};
  const double q = sweep::run_sweep(s).rows[0].Q_mean;
  CHECK(std::fabs(q - (0.01 + 0.99 * 0.1)) < 0.05);
}

TEST_CASE("disordered-unstable cells break symmetry on the coarse grid" * doctest::timeout(900)) {
  sweep::SweepSpec s;
  s.base.N = 100;
  s.T = 2000.0;
  s.R_values = util::linspace(0.05, 0.25, 5);
  s.sigma_values = util::linspace(0.01, 0.2, 5);
  sweep::PhaseDiagramTable ref_table;
  ref_table.N = 100;
  int checked = 0;
  for (std::size_t i = 0; i < s.R_values.size(); ++i)
    for (std::size_t j = 0; j < s.sigma_values.size(); ++j) {
      const double R = s.R_values[i], sigma = s.sigma_values[j];
      if (stability::classify_phase_region(R, sigma).label != stability::PhaseLabel::disordered_unstable) continue;
      const auto row = sweep::run_cell(s, i, j, 0);
      INFO("R=" << R << " sigma=" << sigma << " Q=" << row.Q_mean);
      CHECK(row.Q_mean > sweep::disordered_reference(ref_table, R) + 0.1);
      ++checked;
    }
  CHECK(checked >= 5);
}

TEST_CASE("pde engine cell") {
  sweep::SweepSpec s;
  s.engine = sweep::Engine::pde;
  s.T = 2.0;
  s.R_values = {0.1};
  s.sigma_values = {0.3};
  const auto t = sweep::run_sweep(s);
  // gamma far above 1/3: the uniform state persists, Q = 2R
  CHECK(t.rows[0].Q_mean == doctest::Approx(0.2).epsilon(1e-6));
  CHECK(t.rows[0].n_clusters == 0);
  CHECK(csv(sweep::run_sweep(s)) == csv(t));
}

}
