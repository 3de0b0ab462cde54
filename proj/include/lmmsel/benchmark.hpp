#pragma once

#include "lmmsel/adaptive_ridge.hpp"
#include "lmmsel/metrics.hpp"
#include "lmmsel/model_selection.hpp"
#include "lmmsel/simulate.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lmmsel {

/// iwr: penalty_power 0 (L0 approximation). l1: penalty_power 1, the
/// in-repo lasso-type baseline from the same reweighting scheme.
enum class Method { kIwr, kL1 };

std::string method_name(Method m);
Method parse_method(const std::string& name);

/// base with penalty_power set for the method.
PenaltyConfig method_penalty(Method m, const PenaltyConfig& base);

struct BenchmarkConfig {
  Scenario scenario = default_scenario(0);  // seed replaced per replication
  int replications = 20;
  std::uint64_t master_seed = 1;
  double lambda_lo = 1e-2;
  double lambda_hi = 1e2;
  int lambda_count = 25;
  std::vector<Method> methods{Method::kIwr, Method::kL1};
  PenaltyConfig penalty;
};

void validate(const BenchmarkConfig& config);

struct MethodRun {
  Method method = Method::kIwr;
  bool ok = false;
  std::string error;
  ChosenModel chosen;
  ReplicationOutcome outcome;  // beta_hat = penalized estimate on the chosen active set
  double refit_mse = 0.0;      // same error measured on the refitted ML estimate
  int nonconverged_lambdas = 0;
};

struct ReplicationResult {
  int index = 0;
  std::uint64_t seed = 0;
  std::vector<MethodRun> runs;  // one per configured method, same order
};

struct MethodSummary {
  Method method = Method::kIwr;
  int failed = 0;
  BenchmarkSummary summary;  // over successful replications only
  bool has_summary = false;
};

struct BenchmarkResult {
  std::vector<ReplicationResult> replications;
  std::vector<MethodSummary> summaries;
};

/// simulate -> regularization path -> BIC choice for each configured method.
ReplicationResult run_replication(const BenchmarkConfig& config, int index);

/// Replications distributed over OpenMP threads (threads <= 0: runtime
/// default). Results are ordered by replication index and do not depend on
/// the thread count.
BenchmarkResult run_benchmark(const BenchmarkConfig& config, int threads = 0);

/// Serial reference for run_benchmark.
BenchmarkResult run_benchmark_serial(const BenchmarkConfig& config);

}  // namespace lmmsel
