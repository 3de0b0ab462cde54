#include "lmmsel/profiled_likelihood.hpp"

#include <cmath>
#include <numbers>

namespace lmmsel {

namespace {

void check_beta(const LmmDataset& data, const Vector& beta) {
  if (beta.size() != data.p())
    throw InputError("beta has length " + std::to_string(beta.size()) + ", expected " +
                     std::to_string(data.p()));
}

void check_template(const LmmDataset& data, const CovarianceTemplate& tmpl) {
  if (tmpl.q() != data.q())
    throw InputError("template q = " + std::to_string(tmpl.q()) + " but Z has " +
                     std::to_string(data.q()) + " columns");
}

double logdet_from_llt(const Eigen::LLT<Matrix>& llt) {
  const auto diag = llt.matrixLLT().diagonal();
  double s = 0.0;
  for (Index i = 0; i < diag.size(); ++i) s += std::log(diag(i));
  return 2.0 * s;
}

// Lambda^T G Lambda for symmetric G, using the block-diagonal structure.
Matrix lambda_congruence(const CovarianceTemplate& tmpl, const Vector& theta, const Matrix& G) {
  const Index b = tmpl.block_size;
  if (b == 1) return (theta(0) * theta(0)) * G;
  const Matrix lambda = materialize_lambda(tmpl, theta);
  Matrix g_lambda(G.rows(), G.cols());
  for (Index blk = 0; blk < tmpl.n_blocks; ++blk)
    g_lambda.middleCols(blk * b, b).noalias() =
        G.middleCols(blk * b, b) * lambda.block(blk * b, blk * b, b, b);
  Matrix out(G.rows(), G.cols());
  for (Index blk = 0; blk < tmpl.n_blocks; ++blk)
    out.middleRows(blk * b, b).noalias() =
        lambda.block(blk * b, blk * b, b, b).transpose() * g_lambda.middleRows(blk * b, b);
  return out;
}

}  // namespace

double penalized_rss(const LmmDataset& data, const CovarianceTemplate& tmpl,
                     const Vector& beta, const Vector& theta, const Vector& u) {
  check_beta(data, beta);
  check_template(data, tmpl);
  const Matrix z_lambda = data.Z * materialize_lambda(tmpl, theta);
  return (data.y - data.X * beta - z_lambda * u).squaredNorm() + u.squaredNorm();
}

SphericalSolve solve_spherical_modes(const LmmDataset& data, const CovarianceTemplate& tmpl,
                                     const Vector& beta, const Vector& theta) {
  check_beta(data, beta);
  check_template(data, tmpl);
  const Matrix z_lambda = data.Z * materialize_lambda(tmpl, theta);
  const Vector resid0 = data.y - data.X * beta;

  Matrix system = z_lambda.transpose() * z_lambda;
  system.diagonal().array() += 1.0;
  Eigen::LLT<Matrix> llt(system);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("Cholesky factorization of (Z Lambda)^T Z Lambda + I failed");

  SphericalSolve out;
  out.u_tilde = llt.solve(z_lambda.transpose() * resid0);
  out.logdet_l2 = logdet_from_llt(llt);
  out.g_value = (resid0 - z_lambda * out.u_tilde).squaredNorm() + out.u_tilde.squaredNorm();
  return out;
}

double full_loglik(const LmmDataset& data, const CovarianceTemplate& tmpl, const Vector& beta,
                   const Vector& theta, double sigma2) {
  if (!(sigma2 > 0.0)) throw InputError("sigma2 must be positive");
  const SphericalSolve s = solve_spherical_modes(data, tmpl, beta, theta);
  const double n = static_cast<double>(data.n_obs());
  return -0.5 * n * std::log(2.0 * std::numbers::pi * sigma2) - 0.5 * s.logdet_l2 -
         s.g_value / (2.0 * sigma2);
}

double profiled_deviance_from(double logdet_l2, double g_value, Index n_obs) {
  if (!(g_value > 0.0) || !std::isfinite(g_value))
    throw DegenerateFitError("penalized residual sum of squares is not positive (perfect fit)");
  const double n = static_cast<double>(n_obs);
  return logdet_l2 + n * (1.0 + std::log(2.0 * std::numbers::pi * g_value / n));
}

double profiled_loglik(const LmmDataset& data, const CovarianceTemplate& tmpl,
                       const Vector& beta, const Vector& theta) {
  const SphericalSolve s = solve_spherical_modes(data, tmpl, beta, theta);
  return -0.5 * profiled_deviance_from(s.logdet_l2, s.g_value, data.n_obs());
}

ProfiledDeviance::ProfiledDeviance(const LmmDataset& data, const CovarianceTemplate& tmpl)
    : ProfiledDeviance(data, tmpl, [&] {
        std::vector<Index> all(static_cast<std::size_t>(data.p()));
        for (Index j = 0; j < data.p(); ++j) all[static_cast<std::size_t>(j)] = j;
        return all;
      }()) {}

ProfiledDeviance::ProfiledDeviance(const LmmDataset& data, const CovarianceTemplate& tmpl,
                                   const std::vector<Index>& columns)
    : tmpl_(tmpl), y_(data.y) {
  check_template(data, tmpl);
  X_.resize(data.n_obs(), static_cast<Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k] < 0 || columns[k] >= data.p()) throw InputError("column index out of range");
    X_.col(static_cast<Index>(k)) = data.X.col(columns[k]);
  }
  ztx_.noalias() = data.Z.transpose() * X_;
  zty_.noalias() = data.Z.transpose() * y_;
  ztz_.noalias() = data.Z.transpose() * data.Z;
}

void ProfiledDeviance::refresh(const Vector& theta) {
  if (have_cache_ && cached_theta_.size() == theta.size() && cached_theta_ == theta) return;
  check_theta(tmpl_, theta);
  Matrix system = lambda_congruence(tmpl_, theta, ztz_);
  system.diagonal().array() += 1.0;
  chol_.compute(system);
  if (chol_.info() != Eigen::Success)
    throw std::runtime_error("Cholesky factorization of (Z Lambda)^T Z Lambda + I failed");
  logdet_l2_ = logdet_from_llt(chol_);
  cached_theta_ = theta;
  have_cache_ = true;
}

double ProfiledDeviance::operator()(const Vector& beta, const Vector& theta) {
  if (beta.size() != X_.cols()) throw InputError("beta length does not match selected columns");
  refresh(theta);
  Vector resid = y_;
  resid.noalias() -= X_ * beta;
  Vector zt_resid = zty_;
  zt_resid.noalias() -= ztx_ * beta;
  Vector rhs = lambda_transpose_times(tmpl_, theta, zt_resid);
  chol_.matrixL().solveInPlace(rhs);
  // g(u~) = ||r||^2 - b^T (L L^T)^{-1} b with b = Lambda^T Z^T r.
  const double g = resid.squaredNorm() - rhs.squaredNorm();
  return profiled_deviance_from(logdet_l2_, g, y_.size());
}

}  // namespace lmmsel
