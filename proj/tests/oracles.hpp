#pragma once

// Test-only reference computations. Nothing here shares a code path with the
// Cholesky-of-(Z Lambda)^T Z Lambda + I route used by the library.

#include "lmmsel/model.hpp"
#include "lmmsel/simulate.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace lmmsel::testing {

/// Marginal covariance of y divided by sigma2: I_n + Z Lambda Lambda^T Z^T.
inline Matrix relative_marginal_covariance(const LmmDataset& d, const CovarianceTemplate& t,
                                           const Vector& theta) {
  const Matrix zl = d.Z * materialize_lambda(t, theta);
  Matrix v = zl * zl.transpose();
  v.diagonal().array() += 1.0;
  return v;
}

/// log N(y; X beta, sigma2 (I + Z Lambda Lambda^T Z^T)) from a dense n x n
/// factorization.
inline double marginal_loglik_oracle(const LmmDataset& d, const CovarianceTemplate& t,
                                     const Vector& beta, const Vector& theta, double sigma2) {
  const Matrix cov = sigma2 * relative_marginal_covariance(d, t, theta);
  const Eigen::LLT<Matrix> llt(cov);
  const Vector r = d.y - d.X * beta;
  const Vector w = llt.matrixL().solve(r);
  const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  const double n = static_cast<double>(d.n_obs());
  return -0.5 * n * std::log(2.0 * std::numbers::pi) - 0.5 * logdet - 0.5 * w.squaredNorm();
}

/// log det(I_n + Z Lambda Lambda^T Z^T), equal to log |L_theta|^2 by
/// Sylvester's determinant identity.
inline double dense_logdet_oracle(const LmmDataset& d, const CovarianceTemplate& t,
                                  const Vector& theta) {
  const Eigen::LLT<Matrix> llt(relative_marginal_covariance(d, t, theta));
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

struct MlOracleFit {
  Vector beta;
  double theta = 0.0;
  double deviance = 0.0;  // -2 * profiled log-likelihood
};

/// For a scalar theta: GLS beta(theta) and the profiled deviance computed
/// from the dense marginal covariance.
inline MlOracleFit gls_profile(const LmmDataset& d, const CovarianceTemplate& t, double theta) {
  Vector th(1);
  th << theta;
  const Matrix v = relative_marginal_covariance(d, t, th);
  const Eigen::LLT<Matrix> llt(v);
  const Matrix wx = llt.matrixL().solve(d.X);
  const Vector wy = llt.matrixL().solve(d.y);
  MlOracleFit f;
  f.theta = theta;
  f.beta = wx.colPivHouseholderQr().solve(wy);
  const double rss = (wy - wx * f.beta).squaredNorm();
  const double n = static_cast<double>(d.n_obs());
  const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  f.deviance = logdet + n * (1.0 + std::log(2.0 * std::numbers::pi * rss / n));
  return f;
}

/// Unpenalized ML for a random-intercept model: coarse scan over theta, then
/// golden-section refinement of the GLS-profiled deviance.
inline MlOracleFit ml_oracle(const LmmDataset& d, const CovarianceTemplate& t, double theta_hi = 5.0) {
  const int scan = 200;
  double best_theta = 0.0;
  double best = gls_profile(d, t, 0.0).deviance;
  for (int i = 1; i <= scan; ++i) {
    const double th = theta_hi * i / scan;
    const double dev = gls_profile(d, t, th).deviance;
    if (dev < best) {
      best = dev;
      best_theta = th;
    }
  }
  double a = std::max(0.0, best_theta - theta_hi / scan);
  double b = best_theta + theta_hi / scan;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - phi * (b - a), e = a + phi * (b - a);
  double fc = gls_profile(d, t, c).deviance, fe = gls_profile(d, t, e).deviance;
  for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
    if (fc < fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - phi * (b - a);
      fc = gls_profile(d, t, c).deviance;
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + phi * (b - a);
      fe = gls_profile(d, t, e).deviance;
    }
  }
  return gls_profile(d, t, 0.5 * (a + b));
}

/// Small random instance: either random intercepts on a group-indicator Z
/// or a dense Gaussian Z with a 2 x 2 lower-triangular block template.
struct RandomInstance {
  LmmDataset data;
  CovarianceTemplate tmpl;
  Vector beta;
  Vector theta;
  double sigma2 = 1.0;
};

inline RandomInstance random_instance(Rng& rng, int max_obs = 20, int max_q = 6) {
  RandomInstance inst;
  const int n = 6 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_obs - 5)));
  const int p = 1 + static_cast<int>(rng.below(4));
  Matrix X(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) X(i, j) = rng.normal();
  std::vector<int> groups(static_cast<std::size_t>(n));
  Matrix Z;
  if (rng.uniform() < 0.5) {
    const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(max_q, n))));
    for (int i = 0; i < n; ++i) groups[static_cast<std::size_t>(i)] = 1 + i % k;
    Z = group_indicator_design(groups, k);
    inst.tmpl = random_intercept_template(k);
    inst.theta.resize(1);
    inst.theta << rng.uniform(0.0, 2.0);
  } else {
    const int blocks = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_q / 2)));
    for (int i = 0; i < n; ++i) groups[static_cast<std::size_t>(i)] = 1 + i % blocks;
    Z.resize(n, 2 * blocks);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < 2 * blocks; ++j) Z(i, j) = rng.normal();
    inst.tmpl = block_template(blocks, 2);
    inst.theta.resize(3);
    inst.theta << rng.uniform(0.0, 2.0), rng.normal(), rng.uniform(0.0, 2.0);
  }
  inst.beta.resize(p);
  for (int j = 0; j < p; ++j) inst.beta(j) = rng.normal();
  inst.sigma2 = rng.uniform(0.2, 3.0);
  Vector y = X * inst.beta;
  for (int i = 0; i < n; ++i) y(i) += 2.0 * rng.normal();
  inst.data = build_dataset(std::move(y), std::move(X), std::move(Z), std::move(groups));
  return inst;
}

}  // namespace lmmsel::testing
