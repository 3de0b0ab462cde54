#pragma once

#include "lmmsel/model.hpp"

#include <map>
#include <vector>

namespace lmmsel {

struct ReplicationOutcome {
  Vector beta_hat;  // zero wherever active_set is false
  std::vector<bool> active_set;
  std::vector<bool> true_active;
  Vector beta_star_star;
};

struct Classification {
  bool is_tp = false;   // selected set equals the true set
  bool is_tpc = false;  // selected set contains the true set
  double zp = 1.0;      // share of true zeros estimated as zero
};

/// ||beta_hat - beta_star_star||^2.
double mse(const Vector& beta_hat, const Vector& beta_star_star);

Classification classify(const ReplicationOutcome& outcome);

struct BenchmarkSummary {
  int replications = 0;
  double mse_mean = 0.0;
  double mse_sd = 0.0;
  double active_size_mean = 0.0;
  double active_size_sd = 0.0;
  double active_size_median = 0.0;
  double tp_rate = 0.0;
  double tpc_rate = 0.0;
  double zp_mean = 0.0;
  double zp_sd = 0.0;
  std::map<int, int> zp_histogram;  // ZP in hundredths -> count
};

/// Means and sample standard deviations over replications (0 for a single
/// replication); ZP values are binned after rounding to two decimals.
BenchmarkSummary summarize(const std::vector<ReplicationOutcome>& outcomes);

}  // namespace lmmsel
