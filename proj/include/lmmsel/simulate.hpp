#pragma once

#include "lmmsel/model.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace lmmsel {

/// Seedable generator whose output is identical on every platform: the
/// std::mt19937_64 bit stream (fully specified by the standard) with
/// hand-written uniform and normal transforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  /// Standard normal via Box-Muller; values come in cached pairs.
  double normal();
  /// Uniform integer on [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Sub-seed for replication `index` of a run seeded with `master`:
/// the splitmix64 finalizer applied to master + (index + 1) * 0x9E3779B97F4A7C15.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

enum class CovariateKind { kBalancedBinary, kUniform, kNormal };

struct CovariateSpec {
  std::string name;
  CovariateKind kind = CovariateKind::kNormal;
  double a = 0.0;  // uniform lower bound / normal mean
  double b = 1.0;  // uniform upper bound / normal sd
};

/// Longitudinal random-intercept simulation design.
struct Scenario {
  int n_groups = 90;
  std::vector<int> group_sizes;
  int p_true = 4;
  int p_total = 54;
  Vector beta_true;
  double sigma = 1.0;
  double gamma_var = 1.0;
  std::vector<CovariateSpec> covariates;
  std::uint64_t seed = 0;

  int n_obs() const;
};

void validate(const Scenario& s);

/// n_obs observations over n_groups groups, sizes differing by at most one,
/// larger groups first.
std::vector<int> balanced_group_sizes(int n_obs, int n_groups);

/// 300 observations on 90 subjects, 54 covariates (sex, age, nscore, x4 and
/// 50 standard normal noise columns), beta* = (1, -1, -1, 1), sigma = 1,
/// random-intercept variance 1.
Scenario default_scenario(std::uint64_t seed);

/// Same covariate layout at a custom size; the first min(4, p_total)
/// covariates carry the signal.
Scenario custom_scenario(int n_groups, int obs_per_group, int p_total, std::uint64_t seed);

struct SimulatedDataset {
  LmmDataset dataset;
  Vector beta_star_star;  // beta* padded with zeros to p_total
  Vector gamma;           // realized random intercepts
  std::vector<bool> true_active;
};

/// Draws covariates column by column, then the random intercepts, then the
/// residuals, all from one Rng seeded with scenario.seed.
SimulatedDataset simulate_dataset(const Scenario& scenario);

}  // namespace lmmsel
