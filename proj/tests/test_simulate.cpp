#include "doctest.h"

#include "lmmsel/simulate.hpp"

#include <cmath>
#include <set>

using namespace lmmsel;

TEST_CASE("default scenario layout") {
  const Scenario s = default_scenario(3);
  CHECK(s.n_groups == 90);
  CHECK(s.n_obs() == 300);
  CHECK(s.p_total == 54);
  CHECK(s.p_true == 4);
  CHECK(s.sigma == 1.0);
  CHECK(s.gamma_var == 1.0);
  CHECK(s.beta_true.isApprox(Eigen::Vector4d(1.0, -1.0, -1.0, 1.0)));
  CHECK(std::count(s.group_sizes.begin(), s.group_sizes.end(), 4) == 30);
  CHECK(std::count(s.group_sizes.begin(), s.group_sizes.end(), 3) == 60);
  CHECK(s.group_sizes.front() == 4);
  CHECK(s.group_sizes.back() == 3);
  CHECK(s.covariates[0].name == "sex");
  CHECK(s.covariates[1].name == "age");
  CHECK(s.covariates[2].name == "nscore");
  CHECK(s.covariates[53].name == "noise50");
}

TEST_CASE("simulated dataset shape, covariate ranges and truth") {
  const SimulatedDataset sim = simulate_dataset(default_scenario(3));
  const LmmDataset& d = sim.dataset;
  CHECK(d.n_obs() == 300);
  CHECK(d.p() == 54);
  CHECK(d.q() == 90);
  CHECK(d.X.col(0).sum() == 150.0);
  CHECK(std::set<double>(d.X.col(0).data(), d.X.col(0).data() + 300) == std::set<double>{0.0, 1.0});
  CHECK(d.X.col(1).minCoeff() >= 18.0);
  CHECK(d.X.col(1).maxCoeff() < 37.0);
  CHECK(d.X.col(2).minCoeff() >= 20.0);
  CHECK(d.X.col(2).maxCoeff() < 50.0);
  CHECK((d.Z * Vector::Ones(90)).isApprox(Vector::Ones(300)));
  CHECK(sim.beta_star_star.head(4).isApprox(Eigen::Vector4d(1.0, -1.0, -1.0, 1.0)));
  CHECK(sim.beta_star_star.tail(50).isZero());
  CHECK((sim.beta_star_star.array() != 0.0).count() == 4);
  for (int j = 0; j < 54; ++j) CHECK(sim.true_active[static_cast<std::size_t>(j)] == (j < 4));
}

TEST_CASE("same seed gives bit-identical data, different seeds differ") {
  const SimulatedDataset a = simulate_dataset(default_scenario(3));
  const SimulatedDataset b = simulate_dataset(default_scenario(3));
  const SimulatedDataset c = simulate_dataset(default_scenario(4));
  CHECK(a.dataset.y == b.dataset.y);
  CHECK(a.dataset.X == b.dataset.X);
  CHECK(a.gamma == b.gamma);
  CHECK(a.dataset.y != c.dataset.y);
}

TEST_CASE("generator stream is pinned") {
  // mt19937_64 with the default seed produces 9981545732273789042 as its
  // 10000th output; this guards the bit stream the simulator depends on.
  std::mt19937_64 e;
  e.discard(9999);
  CHECK(e() == 9981545732273789042ULL);
  Rng a(17), b(17);
  for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());
  Rng u(5);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("derived sub-seeds are distinct and reproducible") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(42, i));
  CHECK(seen.size() == 1000);
  CHECK(derive_seed(42, 7) == derive_seed(42, 7));
  CHECK(derive_seed(42, 7) != derive_seed(43, 7));
}

TEST_CASE("noiseless limit reproduces X1 beta*") {
  Scenario s = custom_scenario(10, 3, 6, 9);
  s.sigma = 0.0;
  s.gamma_var = 0.0;
  const SimulatedDataset sim = simulate_dataset(s);
  CHECK(sim.dataset.y.isApprox(sim.dataset.X.leftCols(4) * s.beta_true));
  CHECK(sim.gamma.isZero());
}

TEST_CASE("realized variance components fall inside chi-square bands") {
  // 99% chi-square intervals: 89 df -> [0.66, 1.41]; 299 df -> [0.81, 1.21]
  // on the variance ratio; the checked bands are the wider design values.
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const SimulatedDataset sim = simulate_dataset(default_scenario(seed));
    const Vector& g = sim.gamma;
    const double gmean = g.mean();
    const double gvar = (g.array() - gmean).square().sum() / (g.size() - 1);
    CHECK(gvar >= 0.6);
    CHECK(gvar <= 1.5);
    Vector eps = sim.dataset.y - sim.dataset.X.leftCols(4) * sim.beta_star_star.head(4);
    for (Index i = 0; i < eps.size(); ++i) eps(i) -= g(sim.dataset.groups[static_cast<std::size_t>(i)] - 1);
    const double evar = (eps.array() - eps.mean()).square().sum() / (eps.size() - 1);
    CHECK(evar >= 0.85);
    CHECK(evar <= 1.18);
  }
}

TEST_CASE("group sizes and scenario validation") {
  CHECK(balanced_group_sizes(10, 4) == std::vector<int>{3, 3, 2, 2});
  CHECK_THROWS_AS(balanced_group_sizes(3, 4), InputError);
  Scenario s = default_scenario(1);
  s.p_true = 60;
  CHECK_THROWS_AS(simulate_dataset(s), InputError);
  CHECK_THROWS_AS(custom_scenario(0, 3, 4, 1), InputError);
  const Scenario tiny = custom_scenario(3, 2, 2, 1);
  CHECK(tiny.p_true == 2);
  CHECK(simulate_dataset(tiny).dataset.n_obs() == 6);
}
