#include "doctest.h"

#include "lmmsel/optimizer.hpp"
#include "lmmsel/profiled_likelihood.hpp"
#include "lmmsel/simulate.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>

using namespace lmmsel;
using lmmsel::testing::random_instance;

namespace {

Vector scalar(double v) {
  Vector t(1);
  t << v;
  return t;
}

Matrix normal_system(const testing::RandomInstance& in) {
  const Matrix zl = in.data.Z * materialize_lambda(in.tmpl, in.theta);
  Matrix m = zl.transpose() * zl;
  m.diagonal().array() += 1.0;
  return m;
}

}  // namespace

TEST_CASE("theta = 0 reduces the spherical solve to ordinary residuals") {
  Rng rng(1);
  auto in = random_instance(rng);
  in.tmpl = random_intercept_template(in.data.n_groups);
  in.data.Z = group_indicator_design(in.data.groups, in.data.n_groups);
  const SphericalSolve s = solve_spherical_modes(in.data, in.tmpl, in.beta, scalar(0.0));
  CHECK(s.u_tilde.isZero());
  CHECK(s.logdet_l2 == 0.0);
  CHECK(s.g_value == doctest::Approx((in.data.y - in.data.X * in.beta).squaredNorm()).epsilon(1e-14));
}

TEST_CASE("exact fit gives zero modes and zero g") {
  Rng rng(2);
  auto in = random_instance(rng);
  in.data.y = in.data.X * in.beta;
  const SphericalSolve s = solve_spherical_modes(in.data, in.tmpl, in.beta, in.theta);
  CHECK(s.u_tilde.norm() == doctest::Approx(0.0));
  CHECK(s.g_value == doctest::Approx(0.0));
  CHECK_THROWS_AS(profiled_loglik(in.data, in.tmpl, in.beta, in.theta), DegenerateFitError);
}

TEST_CASE("spherical solve satisfies the normal equations and the invariants") {
  Rng rng(3);
  for (int rep = 0; rep < 30; ++rep) {
    const auto in = random_instance(rng);
    const SphericalSolve s = solve_spherical_modes(in.data, in.tmpl, in.beta, in.theta);
    const Matrix zl = in.data.Z * materialize_lambda(in.tmpl, in.theta);
    const Vector rhs = zl.transpose() * (in.data.y - in.data.X * in.beta);
    CHECK((normal_system(in) * s.u_tilde - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
    CHECK(s.g_value >= 0.0);
    CHECK(s.logdet_l2 >= 0.0);
    CHECK(s.g_value == doctest::Approx(penalized_rss(in.data, in.tmpl, in.beta, in.theta, s.u_tilde)));
  }
}

TEST_CASE("conditional modes match brute-force minimization of g") {
  Rng rng(4);
  OptimizerOptions opts;
  opts.grad_tol = 1e-9;
  opts.step_tol = 1e-14;
  for (int rep = 0; rep < 10; ++rep) {
    const auto in = random_instance(rng, 8, 3);
    const SphericalSolve s = solve_spherical_modes(in.data, in.tmpl, in.beta, in.theta);
    const Objective g = [&](const Vector& u) {
      return penalized_rss(in.data, in.tmpl, in.beta, in.theta, u);
    };
    const OptimizerResult r = minimize(g, Vector::Zero(in.data.q()), opts);
    CHECK((r.x - s.u_tilde).lpNorm<Eigen::Infinity>() <= 1e-6);
  }
}

TEST_CASE("g(u) - g(u~) is the quadratic form of L_theta") {
  Rng rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    const auto in = random_instance(rng);
    const SphericalSolve s = solve_spherical_modes(in.data, in.tmpl, in.beta, in.theta);
    const Matrix m = normal_system(in);
    for (int k = 0; k < 100; ++k) {
      Vector u(in.data.q());
      for (Index i = 0; i < u.size(); ++i) u(i) = 3.0 * rng.normal();
      const double gu = penalized_rss(in.data, in.tmpl, in.beta, in.theta, u);
      const Vector du = u - s.u_tilde;
      const double quad = du.dot(m * du);
      CHECK(gu >= s.g_value);
      CHECK(std::abs(gu - s.g_value - quad) <= 1e-10 * std::max(1.0, gu));
    }
  }
}

TEST_CASE("full log-likelihood: constructed zero and the marginal density") {
  Vector y(1);
  y << 0.0;
  const LmmDataset d = build_dataset(y, Matrix::Zero(1, 1), Matrix::Ones(1, 1), {1});
  const CovarianceTemplate t = random_intercept_template(1);
  CHECK(full_loglik(d, t, Vector::Zero(1), scalar(0.0), 1.0 / (2.0 * std::numbers::pi)) ==
        doctest::Approx(0.0));
  CHECK_THROWS_AS(full_loglik(d, t, Vector::Zero(1), scalar(0.0), 0.0), InputError);

  Rng rng(6);
  for (int rep = 0; rep < 25; ++rep) {
    const auto in = random_instance(rng);
    const double a = full_loglik(in.data, in.tmpl, in.beta, in.theta, in.sigma2);
    const double b = testing::marginal_loglik_oracle(in.data, in.tmpl, in.beta, in.theta, in.sigma2);
    CHECK(std::abs(a - b) <= 1e-8);
  }
}

TEST_CASE("doubling sigma2 changes l by the closed-form amount") {
  Rng rng(7);
  const auto in = random_instance(rng);
  const SphericalSolve s = solve_spherical_modes(in.data, in.tmpl, in.beta, in.theta);
  const double n = static_cast<double>(in.data.n_obs());
  const double l1 = full_loglik(in.data, in.tmpl, in.beta, in.theta, in.sigma2);
  const double l2 = full_loglik(in.data, in.tmpl, in.beta, in.theta, 2.0 * in.sigma2);
  CHECK(l2 - l1 == doctest::Approx(-0.5 * n * std::log(2.0) + s.g_value / (4.0 * in.sigma2)).epsilon(1e-12));
}

TEST_CASE("profile_sigma2") {
  CHECK(profile_sigma2(300.0, 300) == 1.0);
  CHECK(profile_sigma2(0.0, 300) == 0.0);
  CHECK(profile_sigma2(2.5, 10) == 0.25);
  CHECK_THROWS_AS(profile_sigma2(1.0, 0), InputError);
}

TEST_CASE("profiled log-likelihood at theta = 0 is the OLS Gaussian profile") {
  const SimulatedDataset sim = simulate_dataset(custom_scenario(5, 4, 3, 8));
  const CovarianceTemplate t = random_intercept_template(5);
  const Vector beta = Vector::Constant(3, 0.3);
  const double n = 20.0;
  const double rss = (sim.dataset.y - sim.dataset.X * beta).squaredNorm();
  CHECK(profiled_loglik(sim.dataset, t, beta, scalar(0.0)) ==
        doctest::Approx(-0.5 * n * (1.0 + std::log(2.0 * std::numbers::pi * rss / n))).epsilon(1e-13));
}

TEST_CASE("profiling identity and maximality over sigma2") {
  Rng rng(9);
  for (int rep = 0; rep < 20; ++rep) {
    const auto in = random_instance(rng);
    const SphericalSolve s = solve_spherical_modes(in.data, in.tmpl, in.beta, in.theta);
    const double sigma_hat = profile_sigma2(s.g_value, in.data.n_obs());
    const double prof = profiled_loglik(in.data, in.tmpl, in.beta, in.theta);
    CHECK(std::abs(prof - full_loglik(in.data, in.tmpl, in.beta, in.theta, sigma_hat)) <= 1e-10);
    double grid_best = -std::numeric_limits<double>::infinity();
    for (int k = -200; k <= 200; ++k) {
      const double s2 = sigma_hat * std::exp(k / 100.0);
      const double l = full_loglik(in.data, in.tmpl, in.beta, in.theta, s2);
      CHECK(prof >= l - 1e-12);
      grid_best = std::max(grid_best, l);
    }
    CHECK(grid_best == doctest::Approx(prof).epsilon(1e-10));
  }
}

TEST_CASE("log |L_theta|^2 equals the dense log-determinant") {
  Rng rng(10);
  for (int rep = 0; rep < 30; ++rep) {
    const auto in = random_instance(rng);
    const SphericalSolve s = solve_spherical_modes(in.data, in.tmpl, in.beta, in.theta);
    const double ref = testing::dense_logdet_oracle(in.data, in.tmpl, in.theta);
    CHECK(std::abs(s.logdet_l2 - ref) <= 1e-9 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("profiled deviance is reproducible on the default scenario") {
  const SimulatedDataset a = simulate_dataset(default_scenario(3));
  const SimulatedDataset b = simulate_dataset(default_scenario(3));
  const CovarianceTemplate t = random_intercept_template(90);
  const double da = -2.0 * profiled_loglik(a.dataset, t, a.beta_star_star, scalar(1.0));
  const double db = -2.0 * profiled_loglik(b.dataset, t, b.beta_star_star, scalar(1.0));
  CHECK(std::isfinite(da));
  CHECK(da == db);
}

TEST_CASE("cached deviance kernel agrees with the reference path") {
  Rng rng(12);
  for (int rep = 0; rep < 30; ++rep) {
    const auto in = random_instance(rng);
    ProfiledDeviance dev(in.data, in.tmpl);
    const double ref = -2.0 * profiled_loglik(in.data, in.tmpl, in.beta, in.theta);
    CHECK(dev(in.beta, in.theta) == doctest::Approx(ref).epsilon(1e-10));
    // Alternate theta to exercise cache invalidation.
    Vector other = in.theta;
    other(0) += 0.25;
    CHECK(dev(in.beta, other) ==
          doctest::Approx(-2.0 * profiled_loglik(in.data, in.tmpl, in.beta, other)).epsilon(1e-10));
    CHECK(dev(in.beta, in.theta) == doctest::Approx(ref).epsilon(1e-10));
  }
}

TEST_CASE("column-restricted kernel matches zero-padded reference") {
  const SimulatedDataset sim = simulate_dataset(custom_scenario(6, 4, 5, 13));
  const CovarianceTemplate t = random_intercept_template(6);
  ProfiledDeviance dev(sim.dataset, t, {1, 3});
  Vector sub(2);
  sub << -0.8, 0.4;
  Vector full = Vector::Zero(5);
  full(1) = -0.8;
  full(3) = 0.4;
  CHECK(dev(sub, scalar(0.9)) ==
        doctest::Approx(-2.0 * profiled_loglik(sim.dataset, t, full, scalar(0.9))).epsilon(1e-10));
  ProfiledDeviance empty(sim.dataset, t, {});
  CHECK(empty(Vector(), scalar(0.9)) ==
        doctest::Approx(-2.0 * profiled_loglik(sim.dataset, t, Vector::Zero(5), scalar(0.9))).epsilon(1e-10));
}

TEST_CASE("marginal oracle sanity") {
  Rng rng(14);
  auto in = random_instance(rng);
  Vector zero_theta = Vector::Zero(in.tmpl.theta_dim());
  const Vector r = in.data.y - in.data.X * in.beta;
  const double n = static_cast<double>(in.data.n_obs());
  const double iid = -0.5 * n * std::log(2.0 * std::numbers::pi * in.sigma2) - r.squaredNorm() / (2.0 * in.sigma2);
  CHECK(testing::marginal_loglik_oracle(in.data, in.tmpl, in.beta, zero_theta, in.sigma2) ==
        doctest::Approx(iid).epsilon(1e-12));
  // Beyond the mode the density decreases monotonically in sigma2.
  const double mode = r.squaredNorm() / n;
  double prev = testing::marginal_loglik_oracle(in.data, in.tmpl, in.beta, zero_theta, 2.0 * mode);
  for (double s2 = 4.0 * mode; s2 < 1e8; s2 *= 2.0) {
    const double cur = testing::marginal_loglik_oracle(in.data, in.tmpl, in.beta, zero_theta, s2);
    CHECK(cur < prev);
    prev = cur;
  }
}
