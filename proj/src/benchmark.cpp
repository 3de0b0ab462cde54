#include "lmmsel/benchmark.hpp"

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lmmsel {

std::string method_name(Method m) { return m == Method::kIwr ? "iwr" : "l1"; }

Method parse_method(const std::string& name) {
  if (name == "iwr") return Method::kIwr;
  if (name == "l1") return Method::kL1;
  throw InputError("unknown method '" + name + "' (expected iwr or l1)");
}

PenaltyConfig method_penalty(Method m, const PenaltyConfig& base) {
  PenaltyConfig c = base;
  c.penalty_power = m == Method::kIwr ? 0.0 : 1.0;
  return c;
}

void validate(const BenchmarkConfig& c) {
  if (c.replications < 1) throw InputError("replication count must be >= 1");
  if (c.methods.empty()) throw InputError("no methods selected");
  validate(c.scenario);
  validate(c.penalty);
  lambda_grid(c.lambda_lo, c.lambda_hi, c.lambda_count);
}

ReplicationResult run_replication(const BenchmarkConfig& config, int index) {
  ReplicationResult rep;
  rep.index = index;
  rep.seed = derive_seed(config.master_seed, static_cast<std::uint64_t>(index));
  Scenario scenario = config.scenario;
  scenario.seed = rep.seed;
  const SimulatedDataset sim = simulate_dataset(scenario);
  const CovarianceTemplate tmpl = random_intercept_template(sim.dataset.n_groups);
  const Vector grid = lambda_grid(config.lambda_lo, config.lambda_hi, config.lambda_count);

  for (Method m : config.methods) {
    MethodRun run;
    run.method = m;
    try {
      const PathResult path = regularization_path(sim.dataset, tmpl, grid, method_penalty(m, config.penalty));
      for (const IwrResult& f : path.fits) run.nonconverged_lambdas += f.converged ? 0 : 1;
      run.chosen = select_model(path);
      run.outcome.beta_hat = run.chosen.penalized_beta;
      run.outcome.active_set = run.chosen.active_set;
      run.outcome.true_active = sim.true_active;
      run.outcome.beta_star_star = sim.beta_star_star;
      run.refit_mse = mse(run.chosen.params.beta, sim.beta_star_star);
      run.ok = true;
    } catch (const std::exception& e) {
      run.error = e.what();
    }
    rep.runs.push_back(std::move(run));
  }
  return rep;
}

namespace {

BenchmarkResult summarize_runs(const BenchmarkConfig& config, std::vector<ReplicationResult> reps) {
  BenchmarkResult out;
  out.replications = std::move(reps);
  for (std::size_t k = 0; k < config.methods.size(); ++k) {
    MethodSummary ms;
    ms.method = config.methods[k];
    std::vector<ReplicationOutcome> outcomes;
    for (const ReplicationResult& r : out.replications) {
      if (r.runs[k].ok)
        outcomes.push_back(r.runs[k].outcome);
      else
        ++ms.failed;
    }
    if (!outcomes.empty()) {
      ms.summary = summarize(outcomes);
      ms.has_summary = true;
    }
    out.summaries.push_back(std::move(ms));
  }
  return out;
}

}  // namespace

BenchmarkResult run_benchmark(const BenchmarkConfig& config, int threads) {
  validate(config);
  std::vector<ReplicationResult> reps(static_cast<std::size_t>(config.replications));
#ifdef _OPENMP
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#else
  const int nthreads = 1;
  (void)threads;
#endif
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
  for (int i = 0; i < config.replications; ++i) {
    try {
      reps[static_cast<std::size_t>(i)] = run_replication(config, i);
    } catch (...) {
#pragma omp critical(lmmsel_benchmark_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return summarize_runs(config, std::move(reps));
}

BenchmarkResult run_benchmark_serial(const BenchmarkConfig& config) {
  validate(config);
  std::vector<ReplicationResult> reps;
  for (int i = 0; i < config.replications; ++i) reps.push_back(run_replication(config, i));
  return summarize_runs(config, std::move(reps));
}

}  // namespace lmmsel
