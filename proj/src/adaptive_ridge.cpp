#include "lmmsel/adaptive_ridge.hpp"

#include <cmath>
#include <limits>

namespace lmmsel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double weight(double b, double delta, double power, double tau) {
  const double base = std::pow(std::abs(b), tau) + std::pow(delta, tau);
  const double expo = (power - 2.0) / tau;
  if (expo == 0.0) return 1.0;
  if (expo == -1.0) return 1.0 / base;
  return std::pow(base, expo);
}

}  // namespace

void validate(const PenaltyConfig& c) {
  if (!(c.lambda >= 0.0) || !std::isfinite(c.lambda)) throw InputError("lambda must be >= 0");
  if (!(c.delta > 0.0)) throw InputError("delta must be > 0");
  if (!(c.penalty_power > 0.0 || c.penalty_power == 0.0) || c.penalty_power > 2.0)
    throw InputError("penalty_power must lie in [0, 2]");
  if (!(c.tau > 0.0)) throw InputError("tau must be > 0");
  if (!(c.outer_tol > 0.0)) throw InputError("outer_tol must be > 0");
  if (c.max_outer_iters < 1) throw InputError("max_outer_iters must be >= 1");
  if (!(c.threshold > 0.0 && c.threshold < 1.0)) throw InputError("threshold must lie in (0, 1)");
}

double penalized_objective(const LmmDataset& data, const CovarianceTemplate& tmpl,
                           const Vector& beta, const Vector& theta, double lambda,
                           const Vector& weights) {
  if (weights.size() != beta.size()) throw InputError("weights and beta lengths differ");
  if (!(lambda >= 0.0)) throw InputError("lambda must be >= 0");
  if ((weights.array() <= 0.0).any()) throw InputError("weights must be positive");
  double dev;
  try {
    dev = -2.0 * profiled_loglik(data, tmpl, beta, theta);
  } catch (const DegenerateFitError&) {
    return kInf;
  }
  return dev + lambda * (weights.array() * beta.array().square()).sum();
}

Vector update_weights(const Vector& beta, const PenaltyConfig& config) {
  if (!(config.delta > 0.0)) throw InputError("delta must be > 0");
  Vector w(beta.size());
  for (Index j = 0; j < beta.size(); ++j)
    w(j) = weight(beta(j), config.delta, config.penalty_power, config.tau);
  return w;
}

Vector selection_indicator(const Vector& weights, const Vector& beta) {
  if (weights.size() != beta.size()) throw InputError("weights and beta lengths differ");
  return (weights.array() * beta.array().square()).matrix();
}

Vector relevance(const Vector& beta, double delta, double tau) {
  Vector r(beta.size());
  for (Index j = 0; j < beta.size(); ++j)
    r(j) = weight(beta(j), delta, 0.0, tau) * beta(j) * beta(j);
  return r;
}

std::vector<bool> threshold_selection(const Vector& indicator, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw InputError("threshold must lie in (0, 1)");
  std::vector<bool> active(static_cast<std::size_t>(indicator.size()));
  for (Index j = 0; j < indicator.size(); ++j)
    active[static_cast<std::size_t>(j)] = indicator(j) >= threshold;
  return active;
}

IwrResult iwr_fit(const LmmDataset& data, const CovarianceTemplate& tmpl,
                  const PenaltyConfig& config, const Vector& beta_init, const Vector& theta_init) {
  validate(config);
  const Index p = data.p();
  const Index k = tmpl.theta_dim();
  if (beta_init.size() != p) throw InputError("beta_init has wrong length");
  check_theta(tmpl, theta_init);

  ProfiledDeviance deviance(data, tmpl);
  Vector weights = Vector::Ones(p);
  Vector selection = Vector::Zero(p);  // the first ridge pass never counts as settled

  const Objective objective = [&](const Vector& x) {
    const Vector beta = x.head(p);
    try {
      return deviance(beta, x.tail(k)) +
             config.lambda * (weights.array() * beta.array().square()).sum();
    } catch (const DegenerateFitError&) {
      return kInf;
    } catch (const InputError&) {
      return kInf;
    }
  };

  Vector lower(p + k), upper(p + k);
  lower.head(p).setConstant(-kInf);
  lower.tail(k) = tmpl.theta_lower_bounds();
  upper.setConstant(kInf);

  Vector cold(p + k);
  cold.head(p).setOnes();
  cold.tail(k) = tmpl.initial_theta();

  Vector x(p + k);
  x.head(p) = beta_init;
  x.tail(k) = theta_init;

  IwrResult res;
  for (int outer = 1; outer <= config.max_outer_iters; ++outer) {
    IwrIteration it;
    OptimizerResult inner = minimize(objective, x, lower, upper, config.inner);
    if (!inner.converged) {
      OptimizerResult retry = minimize(objective, cold, lower, upper, config.inner);
      it.restarted = true;
      if (retry.converged || retry.f < inner.f) inner = std::move(retry);
    }
    x = inner.x;
    const Vector beta = x.head(p);
    weights = update_weights(beta, config);
    const Vector previous = selection;
    selection = selection_indicator(weights, beta);

    it.objective = inner.f;
    it.indicator_change = (selection - previous).lpNorm<Eigen::Infinity>();
    it.inner_converged = inner.converged;
    it.inner_iterations = inner.iterations;
    res.trace.push_back(it);
    res.outer_iters = outer;

    if (!inner.converged) {
      res.diagnostic = "inner optimizer did not converge at outer iteration " +
                       std::to_string(outer) + " (" + inner.status + ")";
      break;
    }
    if (it.indicator_change < config.outer_tol) {
      res.converged = true;
      break;
    }
  }
  if (!res.converged && res.diagnostic.empty())
    res.diagnostic = "selection indicator did not settle within " +
                     std::to_string(config.max_outer_iters) + " outer iterations";

  res.beta = x.head(p);
  res.theta = x.tail(k);
  res.weights = weights;
  res.selection_indicator = selection;
  res.active_set = threshold_selection(relevance(res.beta, config.delta, config.tau), config.threshold);
  const SphericalSolve solve = solve_spherical_modes(data, tmpl, res.beta, res.theta);
  res.u_tilde = solve.u_tilde;
  res.sigma2 = profile_sigma2(solve.g_value, data.n_obs());
  try {
    res.minus2_profiled_loglik = profiled_deviance_from(solve.logdet_l2, solve.g_value, data.n_obs());
  } catch (const DegenerateFitError&) {
    res.minus2_profiled_loglik = -kInf;
  }
  return res;
}

IwrResult iwr_fit(const LmmDataset& data, const CovarianceTemplate& tmpl,
                  const PenaltyConfig& config) {
  return iwr_fit(data, tmpl, config, Vector::Ones(data.p()), tmpl.initial_theta());
}

}  // namespace lmmsel
