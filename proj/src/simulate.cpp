#include "lmmsel/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace lmmsel {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(angle);
  has_spare_ = true;
  return r * std::cos(angle);
}

std::uint64_t Rng::below(std::uint64_t n) {
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return v % n;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

int Scenario::n_obs() const { return std::accumulate(group_sizes.begin(), group_sizes.end(), 0); }

void validate(const Scenario& s) {
  if (s.n_groups < 1) throw InputError("scenario needs at least one group");
  if (static_cast<int>(s.group_sizes.size()) != s.n_groups)
    throw InputError("group_sizes must have one entry per group");
  for (int n : s.group_sizes)
    if (n < 1) throw InputError("every group needs at least one observation");
  if (s.p_true < 0 || s.p_true > s.p_total) throw InputError("need 0 <= p_true <= p_total");
  if (s.beta_true.size() != s.p_true) throw InputError("beta_true must have p_true entries");
  if (static_cast<int>(s.covariates.size()) != s.p_total)
    throw InputError("need one covariate spec per column");
  if (!(s.sigma >= 0.0) || !(s.gamma_var >= 0.0))
    throw InputError("sigma and gamma_var must be nonnegative");
}

std::vector<int> balanced_group_sizes(int n_obs, int n_groups) {
  if (n_groups < 1 || n_obs < n_groups) throw InputError("need n_obs >= n_groups >= 1");
  std::vector<int> sizes(static_cast<std::size_t>(n_groups), n_obs / n_groups);
  for (int i = 0; i < n_obs % n_groups; ++i) ++sizes[static_cast<std::size_t>(i)];
  return sizes;
}

namespace {

std::vector<CovariateSpec> design_covariates(int p_total) {
  std::vector<CovariateSpec> specs;
  const CovariateSpec signal[] = {
      {"sex", CovariateKind::kBalancedBinary, 0.0, 1.0},
      {"age", CovariateKind::kUniform, 18.0, 37.0},
      {"nscore", CovariateKind::kUniform, 20.0, 50.0},
      {"x4", CovariateKind::kNormal, 0.0, 1.0},
  };
  for (int j = 0; j < p_total; ++j) {
    if (j < 4)
      specs.push_back(signal[j]);
    else
      specs.push_back({"noise" + std::to_string(j - 3), CovariateKind::kNormal, 0.0, 1.0});
  }
  return specs;
}

Scenario make_scenario(std::vector<int> sizes, int p_total, std::uint64_t seed) {
  Scenario s;
  s.n_groups = static_cast<int>(sizes.size());
  s.group_sizes = std::move(sizes);
  s.p_total = p_total;
  s.p_true = std::min(4, p_total);
  const double beta_star[] = {1.0, -1.0, -1.0, 1.0};
  s.beta_true.resize(s.p_true);
  for (int j = 0; j < s.p_true; ++j) s.beta_true(j) = beta_star[j];
  s.covariates = design_covariates(p_total);
  s.seed = seed;
  return s;
}

}  // namespace

Scenario default_scenario(std::uint64_t seed) {
  return make_scenario(balanced_group_sizes(300, 90), 54, seed);
}

Scenario custom_scenario(int n_groups, int obs_per_group, int p_total, std::uint64_t seed) {
  if (n_groups < 1 || obs_per_group < 1 || p_total < 1)
    throw InputError("groups, observations per group and p_total must be >= 1");
  return make_scenario(std::vector<int>(static_cast<std::size_t>(n_groups), obs_per_group),
                       p_total, seed);
}

SimulatedDataset simulate_dataset(const Scenario& s) {
  validate(s);
  const int n = s.n_obs();
  Rng rng(s.seed);

  std::vector<int> groups;
  groups.reserve(static_cast<std::size_t>(n));
  for (int g = 0; g < s.n_groups; ++g)
    groups.insert(groups.end(), static_cast<std::size_t>(s.group_sizes[static_cast<std::size_t>(g)]), g + 1);

  Matrix X(n, s.p_total);
  std::vector<std::string> names;
  for (int j = 0; j < s.p_total; ++j) {
    const CovariateSpec& spec = s.covariates[static_cast<std::size_t>(j)];
    names.push_back(spec.name);
    switch (spec.kind) {
      case CovariateKind::kBalancedBinary: {
        for (int i = 0; i < n; ++i) X(i, j) = i < n / 2 ? 1.0 : 0.0;
        for (int i = n - 1; i > 0; --i) {
          const auto k = static_cast<Index>(rng.below(static_cast<std::uint64_t>(i) + 1));
          std::swap(X(i, j), X(k, j));
        }
        break;
      }
      case CovariateKind::kUniform:
        for (int i = 0; i < n; ++i) X(i, j) = rng.uniform(spec.a, spec.b);
        break;
      case CovariateKind::kNormal:
        for (int i = 0; i < n; ++i) X(i, j) = spec.a + spec.b * rng.normal();
        break;
    }
  }

  Vector gamma(s.n_groups);
  const double gamma_sd = std::sqrt(s.gamma_var);
  for (int g = 0; g < s.n_groups; ++g) gamma(g) = gamma_sd * rng.normal();

  Vector y = X.leftCols(s.p_true) * s.beta_true;
  for (int i = 0; i < n; ++i) y(i) += gamma(groups[static_cast<std::size_t>(i)] - 1) + s.sigma * rng.normal();

  SimulatedDataset out;
  Matrix Z = group_indicator_design(groups, s.n_groups);
  out.dataset = build_dataset(std::move(y), std::move(X), std::move(Z), std::move(groups), std::move(names));
  out.beta_star_star = Vector::Zero(s.p_total);
  out.beta_star_star.head(s.p_true) = s.beta_true;
  out.gamma = gamma;
  out.true_active.assign(static_cast<std::size_t>(s.p_total), false);
  for (int j = 0; j < s.p_true; ++j)
    out.true_active[static_cast<std::size_t>(j)] = s.beta_true(j) != 0.0;
  return out;
}

}  // namespace lmmsel
