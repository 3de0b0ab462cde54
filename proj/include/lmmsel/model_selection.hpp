#pragma once

#include "lmmsel/adaptive_ridge.hpp"
#include "lmmsel/model.hpp"

#include <stdexcept>
#include <vector>

namespace lmmsel {

/// No usable (converged) fit to choose from.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `count` log-equispaced values from hi down to lo; endpoints exact.
Vector lambda_grid(double lo, double hi, int count);

/// Unpenalized profiled-ML fit with X restricted to the active columns.
struct RefitResult {
  ModelParams params;  // beta has length p with exact zeros off the active set
  double loglik = 0.0; // l(beta, theta, sigma2 | y) at sigma2 = g(u~) / n
  bool converged = false;
  Index n_active = 0;
};

RefitResult refit_selected(const LmmDataset& data, const CovarianceTemplate& tmpl,
                           const std::vector<bool>& active_set, const OptimizerOptions& opts = {});

/// -2 loglik + log(n) * (n_active + theta_dim + 1).
double bic(double loglik, Index n_obs, Index n_active, Index theta_dim);

enum class PathMode {
  kWarmStart,    // descending lambda, each fit started at the previous solution
  kColdParallel, // every lambda cold-started, grid points fitted concurrently
  kColdSerial,   // serial reference for kColdParallel
};

struct PathResult {
  Vector lambdas;
  std::vector<IwrResult> fits;
  std::vector<std::vector<bool>> active_sets;
  std::vector<RefitResult> refits;  // refit of each lambda's active set
  std::vector<double> bics;
  int chosen_index = -1;
  RefitResult chosen_fit;
};

/// Index of the smallest BIC among eligible entries; ties go to the earlier
/// (larger-lambda) entry. -1 when nothing is eligible.
int argmin_bic(const std::vector<double>& bics, const std::vector<bool>& eligible);

/// Fits every lambda of a descending grid, refits each distinct active set
/// once and scores it by BIC. Only converged fits are eligible for the
/// choice; throws ConvergenceError when there are none.
PathResult regularization_path(const LmmDataset& data, const CovarianceTemplate& tmpl,
                               const Vector& grid, const PenaltyConfig& config,
                               PathMode mode = PathMode::kWarmStart);

struct ChosenModel {
  int index = -1;
  double lambda = 0.0;
  std::vector<bool> active_set;
  Vector penalized_beta;  // IWR estimate at the chosen lambda, zeroed off the active set
  ModelParams params;     // refitted ML parameters
  double loglik = 0.0;
  double bic = 0.0;
};

ChosenModel select_model(const PathResult& path);

}  // namespace lmmsel
