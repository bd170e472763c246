#include <doctest.h>

#include <omp.h>

#include <vector>

#include "hk/kernels.hpp"
#include "hk/rng.hpp"
#include "hk/sde.hpp"

using namespace hk;

namespace {
std::vector<double> random_positions(std::size_t n, std::uint64_t seed) {
  SeededStream rng(seed, 0);
  std::vector<double> x(n);
  for (auto& v : x) v = rng.uniform();
  return x;
}
}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("parallel drift is bit-identical to serial") {
  for (std::size_t n : {1u, 7u, 100u, 513u, 2000u}) {
    const auto x = random_positions(n, n);
    std::vector<double> a(n), b(n);
    kernels::drift_serial(x, 0.1, 1.0, a);
    for (int threads : {1, 2, 4}) {
      omp_set_num_threads(threads);
      kernels::drift_parallel(x, 0.1, 1.0, b);
      CHECK(a == b);
    }
  }
}

TEST_CASE("parallel pair count equals serial") {
  for (std::size_t n : {1u, 100u, 600u}) {
    const auto x = random_positions(n, 40 + n);
    const auto s = kernels::pair_count_serial(x, 0.2, 1.0);
    omp_set_num_threads(3);
    CHECK(kernels::pair_count_parallel(x, 0.2, 1.0) == s);
    CHECK(s >= n);  // diagonal
  }
}

TEST_CASE("vectorized drift agrees with the direct sum") {
  const auto x = random_positions(301, 2);
  ModelParams p;
  p.N = x.size();
  p.R = 0.13;
  std::vector<double> v(x.size());
  kernels::drift_serial(x, p.R, p.L, v);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(v[i] == doctest::Approx(sde::drift(x, i, p)).epsilon(1e-13));
}

TEST_CASE("drift at exact antipode") {
  // R = L/2 includes the antipodal neighbour with d = +L/2
  std::vector<double> x{0.0, 0.5};
  std::vector<double> v(2);
  kernels::drift_serial(x, 0.5, 1.0, v);
  CHECK(v[0] == doctest::Approx(0.25));
  CHECK(v[1] == doctest::Approx(0.25));
}

TEST_CASE("drift is zero for a single agent and for coincident agents") {
  std::vector<double> one{0.3}, v(1);
  kernels::drift_serial(one, 0.1, 1.0, v);
  CHECK(v[0] == 0.0);
  std::vector<double> same(10, 0.7), w(10);
  kernels::drift_serial(same, 0.1, 1.0, w);
  for (double d : w) CHECK(d == 0.0);
}

}
