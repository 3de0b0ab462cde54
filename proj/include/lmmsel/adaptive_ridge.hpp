#pragma once

#include "lmmsel/model.hpp"
#include "lmmsel/optimizer.hpp"
#include "lmmsel/profiled_likelihood.hpp"

#include <string>
#include <vector>

namespace lmmsel {

/// Penalty lambda * sum_j w_j beta_j^2 with weights
/// w_j = (|beta_j|^tau + delta^tau)^((penalty_power - 2) / tau).
/// penalty_power = 0 approximates L0, 1 approximates L1, 2 is plain ridge.
struct PenaltyConfig {
  double lambda = 1.0;
  double delta = 1e-5;
  double penalty_power = 0.0;
  double tau = 2.0;
  double outer_tol = 1e-5;
  int max_outer_iters = 100;
  double threshold = 0.5;
  OptimizerOptions inner;
};

void validate(const PenaltyConfig& config);

/// One outer iteration of the reweighting loop.
struct IwrIteration {
  double objective = 0.0;         // penalized objective at the accepted inner solution
  double indicator_change = 0.0;  // sup-norm of selection - selection_old
  bool inner_converged = false;
  bool restarted = false;         // inner solve was retried from the cold start
  int inner_iterations = 0;
};

struct IwrResult {
  Vector beta;
  Vector theta;
  double sigma2 = 0.0;
  Vector u_tilde;
  Vector weights;
  Vector selection_indicator;  // w_j beta_j^2
  std::vector<bool> active_set;
  int outer_iters = 0;
  bool converged = false;
  double minus2_profiled_loglik = 0.0;
  std::vector<IwrIteration> trace;
  std::string diagnostic;
};

/// -2 l~(beta, theta) + lambda * beta^T W beta. Returns +inf on a degenerate
/// (perfect) fit.
double penalized_objective(const LmmDataset& data, const CovarianceTemplate& tmpl,
                           const Vector& beta, const Vector& theta, double lambda,
                           const Vector& weights);

Vector update_weights(const Vector& beta, const PenaltyConfig& config);

/// Componentwise w_j beta_j^2.
Vector selection_indicator(const Vector& weights, const Vector& beta);

/// beta_j^2 / (beta_j^2 + delta^2) generalized to tau: the L0 form of the
/// indicator, used to decide membership of the active set whatever the
/// penalty power. Equals selection_indicator under the default penalty.
Vector relevance(const Vector& beta, double delta, double tau);

/// indicator_j >= threshold.
std::vector<bool> threshold_selection(const Vector& indicator, double threshold);

/// Iteratively weighted ridge fit for one lambda.
IwrResult iwr_fit(const LmmDataset& data, const CovarianceTemplate& tmpl,
                  const PenaltyConfig& config, const Vector& beta_init, const Vector& theta_init);

/// Cold start: beta = (1, ..., 1), theta = template initial value.
IwrResult iwr_fit(const LmmDataset& data, const CovarianceTemplate& tmpl,
                  const PenaltyConfig& config);

}  // namespace lmmsel
