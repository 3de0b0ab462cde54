#include "lmmsel/model_selection.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <map>

namespace lmmsel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

IwrResult cold_fit(const LmmDataset& data, const CovarianceTemplate& tmpl, const Vector& grid,
                   const PenaltyConfig& config, Index i) {
  PenaltyConfig c = config;
  c.lambda = grid(i);
  return iwr_fit(data, tmpl, c);
}

}  // namespace

Vector lambda_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) throw InputError("lambda grid needs 0 < lo < hi");
  if (count < 2) throw InputError("lambda grid needs count >= 2");
  Vector grid(count);
  const double a = std::log(hi), b = std::log(lo);
  for (int i = 0; i < count; ++i) grid(i) = std::exp(a + (b - a) * i / (count - 1));
  grid(0) = hi;
  grid(count - 1) = lo;
  return grid;
}

RefitResult refit_selected(const LmmDataset& data, const CovarianceTemplate& tmpl,
                           const std::vector<bool>& active_set, const OptimizerOptions& opts) {
  if (static_cast<Index>(active_set.size()) != data.p())
    throw InputError("active set length does not match p");
  std::vector<Index> cols;
  for (Index j = 0; j < data.p(); ++j)
    if (active_set[static_cast<std::size_t>(j)]) cols.push_back(j);
  const Index s = static_cast<Index>(cols.size());
  const Index k = tmpl.theta_dim();

  ProfiledDeviance deviance(data, tmpl, cols);
  Matrix xs(data.n_obs(), s);
  for (Index c = 0; c < s; ++c) xs.col(c) = data.X.col(cols[static_cast<std::size_t>(c)]);

  Vector x0(s + k);
  if (s > 0) x0.head(s) = xs.colPivHouseholderQr().solve(data.y);
  x0.tail(k) = tmpl.initial_theta();

  Vector lower(s + k), upper(s + k);
  lower.head(s).setConstant(-kInf);
  lower.tail(k) = tmpl.theta_lower_bounds();
  upper.setConstant(kInf);

  const Objective objective = [&](const Vector& x) {
    try {
      return deviance(x.head(s), x.tail(k));
    } catch (const DegenerateFitError&) {
      return kInf;
    } catch (const InputError&) {
      return kInf;
    }
  };
  const OptimizerResult opt = minimize(objective, x0, lower, upper, opts);

  RefitResult out;
  out.n_active = s;
  out.converged = opt.converged;
  out.params.beta = Vector::Zero(data.p());
  for (Index c = 0; c < s; ++c) out.params.beta(cols[static_cast<std::size_t>(c)]) = opt.x(c);
  out.params.theta = opt.x.tail(k);
  const SphericalSolve solve = solve_spherical_modes(data, tmpl, out.params.beta, out.params.theta);
  out.params.sigma2 = profile_sigma2(solve.g_value, data.n_obs());
  out.loglik = out.params.sigma2 > 0.0
                   ? full_loglik(data, tmpl, out.params.beta, out.params.theta, out.params.sigma2)
                   : kInf;
  return out;
}

double bic(double loglik, Index n_obs, Index n_active, Index theta_dim) {
  if (n_obs < 1) throw InputError("n_obs must be >= 1");
  const double d = static_cast<double>(n_active + theta_dim + 1);
  return -2.0 * loglik + std::log(static_cast<double>(n_obs)) * d;
}

int argmin_bic(const std::vector<double>& bics, const std::vector<bool>& eligible) {
  int best = -1;
  for (std::size_t i = 0; i < bics.size(); ++i) {
    if (!eligible[i] || !std::isfinite(bics[i])) continue;
    if (best < 0 || bics[i] < bics[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  }
  return best;
}

PathResult regularization_path(const LmmDataset& data, const CovarianceTemplate& tmpl,
                               const Vector& grid, const PenaltyConfig& config, PathMode mode) {
  if (grid.size() < 1) throw InputError("lambda grid is empty");
  for (Index i = 1; i < grid.size(); ++i)
    if (!(grid(i) < grid(i - 1))) throw InputError("lambda grid must be strictly decreasing");
  validate(config);

  const Index m = grid.size();
  PathResult path;
  path.lambdas = grid;
  path.fits.resize(static_cast<std::size_t>(m));

  switch (mode) {
    case PathMode::kWarmStart: {
      Vector beta = Vector::Ones(data.p());
      Vector theta = tmpl.initial_theta();
      for (Index i = 0; i < m; ++i) {
        PenaltyConfig c = config;
        c.lambda = grid(i);
        IwrResult fit = iwr_fit(data, tmpl, c, beta, theta);
        beta = fit.beta;
        theta = fit.theta;
        path.fits[static_cast<std::size_t>(i)] = std::move(fit);
      }
      break;
    }
    case PathMode::kColdParallel: {
      std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
      for (Index i = 0; i < m; ++i) {
        try {
          path.fits[static_cast<std::size_t>(i)] = cold_fit(data, tmpl, grid, config, i);
        } catch (...) {
#pragma omp critical(lmmsel_path_error)
          if (!error) error = std::current_exception();
        }
      }
      if (error) std::rethrow_exception(error);
      break;
    }
    case PathMode::kColdSerial:
      for (Index i = 0; i < m; ++i)
        path.fits[static_cast<std::size_t>(i)] = cold_fit(data, tmpl, grid, config, i);
      break;
  }

  // Refits depend only on the active set, so each distinct set is fitted once.
  std::map<std::vector<bool>, RefitResult> cache;
  std::vector<bool> eligible;
  for (const IwrResult& fit : path.fits) {
    auto it = cache.find(fit.active_set);
    if (it == cache.end())
      it = cache.emplace(fit.active_set, refit_selected(data, tmpl, fit.active_set, config.inner)).first;
    const RefitResult& refit = it->second;
    path.active_sets.push_back(fit.active_set);
    path.refits.push_back(refit);
    path.bics.push_back(bic(refit.loglik, data.n_obs(), refit.n_active, tmpl.theta_dim()));
    eligible.push_back(fit.converged);
  }

  path.chosen_index = argmin_bic(path.bics, eligible);
  if (path.chosen_index < 0) throw ConvergenceError("no lambda on the path produced a converged fit");
  path.chosen_fit = path.refits[static_cast<std::size_t>(path.chosen_index)];
  return path;
}

ChosenModel select_model(const PathResult& path) {
  if (path.chosen_index < 0 || path.chosen_index >= static_cast<int>(path.fits.size()))
    throw ConvergenceError("path has no chosen model");
  const auto i = static_cast<std::size_t>(path.chosen_index);
  ChosenModel out;
  out.index = path.chosen_index;
  out.lambda = path.lambdas(path.chosen_index);
  out.active_set = path.active_sets[i];
  out.penalized_beta = path.fits[i].beta;
  for (Index j = 0; j < out.penalized_beta.size(); ++j)
    if (!out.active_set[static_cast<std::size_t>(j)]) out.penalized_beta(j) = 0.0;
  out.params = path.chosen_fit.params;
  out.loglik = path.chosen_fit.loglik;
  out.bic = path.bics[i];
  return out;
}

}  // namespace lmmsel
