#include "lmmsel/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace lmmsel {

namespace {

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double mse(const Vector& beta_hat, const Vector& beta_star_star) {
  if (beta_hat.size() != beta_star_star.size()) throw InputError("mse: length mismatch");
  return (beta_hat - beta_star_star).squaredNorm();
}

Classification classify(const ReplicationOutcome& o) {
  const std::size_t p = o.true_active.size();
  if (o.active_set.size() != p || static_cast<std::size_t>(o.beta_hat.size()) != p)
    throw InputError("classify: inconsistent vector lengths");
  Classification c;
  c.is_tp = o.active_set == o.true_active;
  c.is_tpc = true;
  int zeros = 0, zeros_hit = 0;
  for (std::size_t j = 0; j < p; ++j) {
    if (o.true_active[j] && !o.active_set[j]) c.is_tpc = false;
    if (!o.true_active[j]) {
      ++zeros;
      if (o.beta_hat(static_cast<Index>(j)) == 0.0) ++zeros_hit;
    }
  }
  c.zp = zeros > 0 ? static_cast<double>(zeros_hit) / zeros : 1.0;
  return c;
}

BenchmarkSummary summarize(const std::vector<ReplicationOutcome>& outcomes) {
  if (outcomes.empty()) throw InputError("summarize: no replications");
  std::vector<double> errors, sizes, zps;
  int tp = 0, tpc = 0;
  BenchmarkSummary s;
  for (const ReplicationOutcome& o : outcomes) {
    const Classification c = classify(o);
    errors.push_back(mse(o.beta_hat, o.beta_star_star));
    sizes.push_back(static_cast<double>(std::count(o.active_set.begin(), o.active_set.end(), true)));
    zps.push_back(c.zp);
    tp += c.is_tp ? 1 : 0;
    tpc += c.is_tpc ? 1 : 0;
    ++s.zp_histogram[static_cast<int>(std::lround(c.zp * 100.0))];
  }
  const double r = static_cast<double>(outcomes.size());
  s.replications = static_cast<int>(outcomes.size());
  s.mse_mean = mean(errors);
  s.mse_sd = sample_sd(errors);
  s.active_size_mean = mean(sizes);
  s.active_size_sd = sample_sd(sizes);
  s.active_size_median = median(sizes);
  s.tp_rate = tp / r;
  s.tpc_rate = tpc / r;
  s.zp_mean = mean(zps);
  s.zp_sd = sample_sd(zps);
  return s;
}

}  // namespace lmmsel
