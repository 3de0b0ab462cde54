#pragma once

#include "lmmsel/model.hpp"

#include <Eigen/Cholesky>

#include <stdexcept>
#include <vector>

namespace lmmsel {

/// g(u~) = 0: the model reproduces y exactly and the profiled likelihood is
/// unbounded. Optimizers treat this as an infinite objective.
class DegenerateFitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Conditional modes of the spherical random effects and the quantities the
/// likelihood needs from the Cholesky factor L_theta of
/// (Z Lambda)^T Z Lambda + I.
struct SphericalSolve {
  Vector u_tilde;
  double logdet_l2 = 0.0;  // log |L_theta|^2
  double g_value = 0.0;    // ||y - X beta - Z Lambda u~||^2 + ||u~||^2
};

/// Penalized residual sum of squares g(u) at an arbitrary u.
double penalized_rss(const LmmDataset& data, const CovarianceTemplate& tmpl,
                     const Vector& beta, const Vector& theta, const Vector& u);

SphericalSolve solve_spherical_modes(const LmmDataset& data, const CovarianceTemplate& tmpl,
                                     const Vector& beta, const Vector& theta);

/// Log-likelihood l(beta, theta, sigma2 | y).
double full_loglik(const LmmDataset& data, const CovarianceTemplate& tmpl, const Vector& beta,
                   const Vector& theta, double sigma2);

inline double profile_sigma2(double g_value, Index n_obs) {
  if (n_obs < 1) throw InputError("n_obs must be >= 1");
  return g_value / static_cast<double>(n_obs);
}

/// -2 * profiled log-likelihood from its parts.
double profiled_deviance_from(double logdet_l2, double g_value, Index n_obs);

/// Profiled log-likelihood l~(beta, theta | y), sigma2 maximized out.
/// Throws DegenerateFitError when g(u~) = 0.
double profiled_loglik(const LmmDataset& data, const CovarianceTemplate& tmpl,
                       const Vector& beta, const Vector& theta);

/// Repeated evaluation of -2 l~ for one dataset, optionally restricted to a
/// subset of fixed-effect columns. Cross products with Z are formed once and
/// the Cholesky factor is cached for the last theta, so probes that only move
/// beta cost O(n p + q^2). Not thread-safe; use one instance per thread.
class ProfiledDeviance {
 public:
  ProfiledDeviance(const LmmDataset& data, const CovarianceTemplate& tmpl);
  ProfiledDeviance(const LmmDataset& data, const CovarianceTemplate& tmpl,
                   const std::vector<Index>& columns);

  /// beta has one entry per selected column.
  double operator()(const Vector& beta, const Vector& theta);

  Index n_beta() const { return X_.cols(); }
  const CovarianceTemplate& covariance_template() const { return tmpl_; }

 private:
  void refresh(const Vector& theta);

  CovarianceTemplate tmpl_;
  Vector y_;
  Matrix X_;
  Matrix ztx_;
  Vector zty_;
  Matrix ztz_;
  Vector cached_theta_;
  Eigen::LLT<Matrix> chol_;
  double logdet_l2_ = 0.0;
  bool have_cache_ = false;
};

}  // namespace lmmsel
