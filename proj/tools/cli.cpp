#include "cli.hpp"

#include "csv_io.hpp"
#include "svg_plot.hpp"

#include "lmmsel/benchmark.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lmmsel::cli {

namespace {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------- helpers

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json to_json(const std::vector<bool>& v) {
  Json a = Json::array();
  for (bool b : v) a.push_back(b);
  return a;
}

Json selected_names(const std::vector<bool>& active, const std::vector<std::string>& names) {
  Json a = Json::array();
  for (std::size_t j = 0; j < active.size(); ++j)
    if (active[j]) a.push_back(names[j]);
  return a;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("failed writing " + path.string());
}

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

std::filesystem::path output_dir(const std::string& dir) {
  const std::filesystem::path p(dir);
  if (!std::filesystem::is_directory(p)) throw InputError("output directory does not exist: " + dir);
  return p;
}

std::string config_comment(const Json& config) { return "config: " + config.dump(); }

void apply_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

// ---------------------------------------------------------------- options

struct ScenarioOptions {
  std::string preset;
  std::uint64_t seed = 1;
  int groups = 0;
  int obs = 0;
  int p_total = 0;
  bool null_signal = false;
  double sigma = 1.0;
  double gamma_var = 1.0;
};

void add_scenario_options(CLI::App* app, ScenarioOptions& o, bool with_seed) {
  app->add_option("--preset", o.preset, "Scenario preset (paper)")->check(CLI::IsMember({"paper"}));
  if (with_seed) app->add_option("--seed", o.seed, "Random seed");
  app->add_option("--groups", o.groups, "Number of groups (custom design)");
  app->add_option("--obs", o.obs, "Observations per group (custom design)");
  app->add_option("--p-total", o.p_total, "Number of covariates (custom design)");
  app->add_flag("--null", o.null_signal, "Set every true coefficient to zero");
  app->add_option("--sigma", o.sigma, "Residual standard deviation");
  app->add_option("--gamma-var", o.gamma_var, "Random-intercept variance");
}

bool is_custom(const ScenarioOptions& o) { return o.groups != 0 || o.obs != 0 || o.p_total != 0; }

Scenario resolve_scenario(const ScenarioOptions& o) {
  const bool custom = is_custom(o);
  if (custom && o.preset == "paper") throw InputError("--preset paper cannot be combined with --groups/--obs/--p-total");
  Scenario s = custom ? custom_scenario(o.groups ? o.groups : 10, o.obs ? o.obs : 3, o.p_total ? o.p_total : 8, o.seed)
                      : default_scenario(o.seed);
  if (o.null_signal) s.beta_true.setZero();
  s.sigma = o.sigma;
  s.gamma_var = o.gamma_var;
  validate(s);
  return s;
}

std::string kind_name(CovariateKind k) {
  switch (k) {
    case CovariateKind::kBalancedBinary: return "balanced_binary";
    case CovariateKind::kUniform: return "uniform";
    case CovariateKind::kNormal: return "normal";
  }
  return "?";
}

Json scenario_json(const Scenario& s) {
  Json covs = Json::array();
  for (const CovariateSpec& c : s.covariates)
    covs.push_back({{"name", c.name}, {"kind", kind_name(c.kind)}, {"a", c.a}, {"b", c.b}});
  return {{"n_groups", s.n_groups}, {"n_obs", s.n_obs()},   {"group_sizes", s.group_sizes},
          {"p_total", s.p_total},   {"p_true", s.p_true},   {"beta_true", to_json(s.beta_true)},
          {"sigma", s.sigma},       {"gamma_var", s.gamma_var}, {"seed", s.seed},
          {"covariates", covs}};
}

void add_penalty_options(CLI::App* app, PenaltyConfig& c, bool with_power) {
  app->add_option("--delta", c.delta, "Relevance calibration delta");
  if (with_power) app->add_option("--penalty-power", c.penalty_power, "Norm exponent: 0 for L0 behaviour, 1 for L1");
  app->add_option("--tau", c.tau, "Approximation exponent");
  app->add_option("--outer-tol", c.outer_tol, "Tolerance on the selection indicator change");
  app->add_option("--max-outer-iters", c.max_outer_iters, "Maximum reweighting iterations");
  app->add_option("--threshold", c.threshold, "Selection threshold on the indicator");
}

Json penalty_json(const PenaltyConfig& c, bool with_lambda) {
  Json j;
  if (with_lambda) j["lambda"] = c.lambda;
  j["delta"] = c.delta;
  j["penalty_power"] = c.penalty_power;
  j["tau"] = c.tau;
  j["outer_tol"] = c.outer_tol;
  j["max_outer_iters"] = c.max_outer_iters;
  j["threshold"] = c.threshold;
  return j;
}

struct GridOptions {
  double lo = 1e-2;
  double hi = 1e2;
  int count = 25;
};

void add_grid_options(CLI::App* app, GridOptions& g) {
  app->add_option("--lambda-min", g.lo, "Smallest lambda of the grid");
  app->add_option("--lambda-max", g.hi, "Largest lambda of the grid");
  app->add_option("--lambda-count", g.count, "Number of log-spaced grid points");
}

// ---------------------------------------------------------------- standardization

/// Covariates are divided by their sample standard deviation. There is no
/// intercept in the model, so columns are not centred.
struct Scaling {
  bool enabled = false;
  Vector scale;
};

Scaling standardize(LmmDataset& d, bool enabled) {
  Scaling s;
  s.enabled = enabled;
  s.scale = Vector::Ones(d.p());
  if (!enabled) return s;
  if (d.n_obs() < 2) throw InputError("--standardize needs at least two observations");
  for (Index j = 0; j < d.p(); ++j) {
    const double mean = d.X.col(j).mean();
    const double sd = std::sqrt((d.X.col(j).array() - mean).square().sum() / static_cast<double>(d.n_obs() - 1));
    if (!(sd > 0.0)) throw InputError("--standardize: covariate '" + d.covariate_names[static_cast<std::size_t>(j)] + "' is constant");
    s.scale(j) = sd;
    d.X.col(j) /= sd;
  }
  return s;
}

Vector original_scale(const Vector& beta, const Scaling& s) { return beta.cwiseQuotient(s.scale); }

// ---------------------------------------------------------------- simulate

int cmd_simulate(const ScenarioOptions& o, const std::string& out_dir, std::ostream& out) {
  const Scenario s = resolve_scenario(o);
  const std::filesystem::path dir = output_dir(out_dir);
  Json config = {{"command", "simulate"}, {"preset", is_custom(o) ? "custom" : "paper"},
                 {"seed", s.seed}, {"null_signal", o.null_signal}, {"scenario", scenario_json(s)}};
  const SimulatedDataset sim = simulate_dataset(s);

  write_dataset_csv((dir / "data.csv").string(), sim.dataset, {config_comment(config)});
  Json truth = {{"config", config},
                {"covariate_names", sim.dataset.covariate_names},
                {"beta_star_star", to_json(sim.beta_star_star)},
                {"true_active", to_json(sim.true_active)},
                {"true_active_names", selected_names(sim.true_active, sim.dataset.covariate_names)},
                {"gamma", to_json(sim.gamma)}};
  write_json(dir / "truth.json", truth);
  write_json(dir / "scenario.json", {{"config", config}, {"scenario", scenario_json(s)}});
  out << "wrote " << sim.dataset.n_obs() << " rows x " << sim.dataset.p() << " covariates to "
      << (dir / "data.csv").string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- fit

int cmd_fit(const std::string& data_path, const PenaltyConfig& penalty, bool standardize_flag,
            const std::string& out_dir, std::ostream& out) {
  validate(penalty);
  const std::filesystem::path dir = output_dir(out_dir);
  LmmDataset data = read_dataset_csv(data_path);
  const Scaling scaling = standardize(data, standardize_flag);
  const CovarianceTemplate tmpl = random_intercept_template(data.n_groups);

  Json config = {{"command", "fit"}, {"data", data_path}, {"standardize", standardize_flag},
                 {"penalty", penalty_json(penalty, true)}};
  const IwrResult fit = iwr_fit(data, tmpl, penalty);

  Json trace = Json::array();
  for (const IwrIteration& it : fit.trace)
    trace.push_back({{"objective", it.objective},
                     {"indicator_change", it.indicator_change},
                     {"inner_converged", it.inner_converged},
                     {"restarted", it.restarted},
                     {"inner_iterations", it.inner_iterations}});
  Json report = {{"config", config},
                 {"covariate_names", data.covariate_names},
                 {"beta", to_json(original_scale(fit.beta, scaling))},
                 {"theta", to_json(fit.theta)},
                 {"sigma2", fit.sigma2},
                 {"u_tilde", to_json(fit.u_tilde)},
                 {"weights", to_json(fit.weights)},
                 {"selection_indicator", to_json(fit.selection_indicator)},
                 {"active_set", to_json(fit.active_set)},
                 {"active_names", selected_names(fit.active_set, data.covariate_names)},
                 {"minus2_profiled_loglik", fit.minus2_profiled_loglik},
                 {"outer_iters", fit.outer_iters},
                 {"converged", fit.converged},
                 {"diagnostic", fit.diagnostic},
                 {"trace", trace}};
  if (scaling.enabled) {
    report["beta_standardized"] = to_json(fit.beta);
    report["column_scale"] = to_json(scaling.scale);
  }
  write_json(dir / "fit.json", report);

  const int n_active = static_cast<int>(std::count(fit.active_set.begin(), fit.active_set.end(), true));
  out << "lambda " << penalty.lambda << ": " << n_active << " active covariates, -2 log L~ "
      << fmt(fit.minus2_profiled_loglik) << ", " << fit.outer_iters << " outer iterations\n";
  if (!fit.converged) {
    out << "not converged: " << fit.diagnostic << '\n';
    return kExitNonConvergence;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- path

int cmd_path(const std::string& data_path, const GridOptions& g, const PenaltyConfig& penalty, bool standardize_flag,
             bool cold, int threads, const std::string& out_dir, std::ostream& out) {
  validate(penalty);
  const Vector grid = lambda_grid(g.lo, g.hi, g.count);
  const std::filesystem::path dir = output_dir(out_dir);
  LmmDataset data = read_dataset_csv(data_path);
  const Scaling scaling = standardize(data, standardize_flag);
  const CovarianceTemplate tmpl = random_intercept_template(data.n_groups);
  apply_threads(threads);

  Json config = {{"command", "path"},
                 {"data", data_path},
                 {"standardize", standardize_flag},
                 {"lambda_min", g.lo},
                 {"lambda_max", g.hi},
                 {"lambda_count", g.count},
                 {"start", cold ? "cold" : "warm"},
                 {"threads", threads},
                 {"penalty", penalty_json(penalty, false)}};
  const PathResult path =
      regularization_path(data, tmpl, grid, penalty, cold ? PathMode::kColdParallel : PathMode::kWarmStart);
  const ChosenModel chosen = select_model(path);
  const Index p = data.p();
  const Index k = tmpl.theta_dim();

  std::ostringstream csv;
  csv << "# " << config_comment(config) << '\n';
  csv << "lambda";
  for (const std::string& name : data.covariate_names) csv << ',' << name;
  csv << ",n_active,bic,refit_loglik,refit_sigma2";
  for (Index t = 0; t < k; ++t) csv << ",refit_theta" << t + 1;
  csv << ",converged,outer_iters\n";
  Matrix coefs(grid.size(), p);
  for (std::size_t i = 0; i < path.fits.size(); ++i) {
    const Vector b = original_scale(path.fits[i].beta, scaling);
    coefs.row(static_cast<Index>(i)) = b.transpose();
    const RefitResult& r = path.refits[i];
    csv << fmt(grid(static_cast<Index>(i)));
    for (Index j = 0; j < p; ++j) csv << ',' << fmt(b(j));
    csv << ',' << r.n_active << ',' << fmt(path.bics[i]) << ',' << fmt(r.loglik) << ',' << fmt(r.params.sigma2);
    for (Index t = 0; t < k; ++t) csv << ',' << fmt(r.params.theta(t));
    csv << ',' << (path.fits[i].converged ? 1 : 0) << ',' << path.fits[i].outer_iters << '\n';
  }
  write_text(dir / "path.csv", csv.str());

  Json bics = Json::array();
  for (double b : path.bics) bics.push_back(b);
  Json report = {{"config", config},
                 {"index", chosen.index},
                 {"lambda", chosen.lambda},
                 {"covariate_names", data.covariate_names},
                 {"active_set", to_json(chosen.active_set)},
                 {"active_names", selected_names(chosen.active_set, data.covariate_names)},
                 {"n_active", static_cast<int>(std::count(chosen.active_set.begin(), chosen.active_set.end(), true))},
                 {"penalized_beta", to_json(original_scale(chosen.penalized_beta, scaling))},
                 {"refit_beta", to_json(original_scale(chosen.params.beta, scaling))},
                 {"theta", to_json(chosen.params.theta)},
                 {"sigma2", chosen.params.sigma2},
                 {"loglik", chosen.loglik},
                 {"bic", chosen.bic},
                 {"bic_path", bics}};
  write_json(dir / "chosen.json", report);

  PathPlot plot;
  plot.lambdas = grid;
  plot.coefficients = coefs;
  plot.names = data.covariate_names;
  plot.highlighted = chosen.active_set;
  plot.marker_index = chosen.index;
  plot.metadata = config.dump();
  write_text(dir / "path.svg", render_path_svg(plot));

  int failed = 0;
  for (const IwrResult& f : path.fits) failed += f.converged ? 0 : 1;
  out << "BIC minimum at lambda " << fmt(chosen.lambda) << " with " << report["n_active"].get<int>()
      << " active covariates";
  if (failed > 0) out << " (" << failed << " of " << grid.size() << " grid points did not converge)";
  out << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- benchmark

std::string summary_text(const BenchmarkConfig& c, const BenchmarkResult& r) {
  std::ostringstream s;
  char buf[160];
  s << "replications: " << c.replications << ", master seed " << c.master_seed << ", " << c.lambda_count
    << " lambda values in [" << c.lambda_lo << ", " << c.lambda_hi << "]\n";
  std::snprintf(buf, sizeof buf, "%-18s", "");
  s << buf;
  for (const MethodSummary& m : r.summaries) {
    std::snprintf(buf, sizeof buf, "%20s", method_name(m.method).c_str());
    s << buf;
  }
  s << '\n';
  auto row = [&](const char* label, auto cell) {
    std::snprintf(buf, sizeof buf, "%-18s", label);
    s << buf;
    for (const MethodSummary& m : r.summaries) {
      std::snprintf(buf, sizeof buf, "%20s", m.has_summary ? cell(m.summary).c_str() : "-");
      s << buf;
    }
    s << '\n';
  };
  auto pair = [](double a, double b) {
    char t[64];
    std::snprintf(t, sizeof t, "%.3f (%.3f)", a, b);
    return std::string(t);
  };
  auto one = [](double a) {
    char t[64];
    std::snprintf(t, sizeof t, "%.3f", a);
    return std::string(t);
  };
  std::snprintf(buf, sizeof buf, "%-18s", "effective R");
  s << buf;
  for (const MethodSummary& m : r.summaries) {
    std::snprintf(buf, sizeof buf, "%20d", c.replications - m.failed);
    s << buf;
  }
  s << '\n';
  row("MSE mean (sd)", [&](const BenchmarkSummary& b) { return pair(b.mse_mean, b.mse_sd); });
  row("|S| mean (sd)", [&](const BenchmarkSummary& b) { return pair(b.active_size_mean, b.active_size_sd); });
  row("|S| median", [&](const BenchmarkSummary& b) { return one(b.active_size_median); });
  row("TP", [&](const BenchmarkSummary& b) { return one(b.tp_rate); });
  row("TPC", [&](const BenchmarkSummary& b) { return one(b.tpc_rate); });
  row("ZP mean (sd)", [&](const BenchmarkSummary& b) { return pair(b.zp_mean, b.zp_sd); });
  return s.str();
}

int cmd_benchmark(const ScenarioOptions& so, int reps, std::uint64_t master_seed, const std::string& methods,
                  const GridOptions& g, const PenaltyConfig& penalty, int threads, const std::string& out_dir,
                  std::ostream& out) {
  BenchmarkConfig c;
  c.scenario = resolve_scenario(so);
  c.replications = reps;
  c.master_seed = master_seed;
  c.lambda_lo = g.lo;
  c.lambda_hi = g.hi;
  c.lambda_count = g.count;
  c.penalty = penalty;
  c.methods.clear();
  std::stringstream ms(methods);
  std::string item;
  while (std::getline(ms, item, ',')) {
    const Method m = parse_method(item);
    if (std::find(c.methods.begin(), c.methods.end(), m) != c.methods.end())
      throw InputError("method listed twice: " + item);
    c.methods.push_back(m);
  }
  validate(c);
  const std::filesystem::path dir = output_dir(out_dir);

  Json scenario = scenario_json(c.scenario);
  scenario.erase("seed");
  scenario["preset"] = is_custom(so) ? "custom" : "paper";
  Json method_names = Json::array();
  for (Method m : c.methods) method_names.push_back(method_name(m));
  Json config = {{"command", "benchmark"},   {"replications", reps},    {"master_seed", master_seed},
                 {"methods", method_names},  {"lambda_min", g.lo},      {"lambda_max", g.hi},
                 {"lambda_count", g.count},  {"threads", threads},      {"scenario", scenario},
                 {"penalty", penalty_json(penalty, false)}};

  const BenchmarkResult result = run_benchmark(c, threads);
  const std::string comment = "# " + config_comment(config) + "\n";

  std::ostringstream summary;
  summary << comment
          << "method,replications,failed,mse_mean,mse_sd,active_size_mean,active_size_sd,active_size_median,"
             "tp_rate,tpc_rate,zp_mean,zp_sd\n";
  std::ostringstream hist;
  hist << comment << "method,zp,count\n";
  for (const MethodSummary& m : result.summaries) {
    const BenchmarkSummary& b = m.summary;
    summary << method_name(m.method) << ',' << c.replications - m.failed << ',' << m.failed;
    if (m.has_summary) {
      for (double v : {b.mse_mean, b.mse_sd, b.active_size_mean, b.active_size_sd, b.active_size_median, b.tp_rate,
                       b.tpc_rate, b.zp_mean, b.zp_sd})
        summary << ',' << fmt(v);
      for (const auto& [bin, n] : b.zp_histogram) {
        char z[16];
        std::snprintf(z, sizeof z, "%.2f", bin / 100.0);
        hist << method_name(m.method) << ',' << z << ',' << n << '\n';
      }
    } else {
      summary << ",,,,,,,,,";
    }
    summary << '\n';
  }
  write_text(dir / "benchmark_summary.csv", summary.str());
  write_text(dir / "zp_histogram.csv", hist.str());

  std::ostringstream reps_csv;
  reps_csv << comment
           << "replication,seed,method,ok,lambda,n_active,mse,refit_mse,tp,tpc,zp,nonconverged_lambdas,active,error\n";
  for (const ReplicationResult& rep : result.replications) {
    for (const MethodRun& run : rep.runs) {
      reps_csv << rep.index << ',' << rep.seed << ',' << method_name(run.method) << ',' << (run.ok ? 1 : 0);
      if (run.ok) {
        const Classification cl = classify(run.outcome);
        std::string active;
        for (std::size_t j = 0; j < run.outcome.active_set.size(); ++j)
          if (run.outcome.active_set[j])
            active += (active.empty() ? "" : ";") + c.scenario.covariates[j].name;
        reps_csv << ',' << fmt(run.chosen.lambda) << ','
                 << std::count(run.outcome.active_set.begin(), run.outcome.active_set.end(), true) << ','
                 << fmt(mse(run.outcome.beta_hat, run.outcome.beta_star_star)) << ',' << fmt(run.refit_mse) << ','
                 << (cl.is_tp ? 1 : 0) << ',' << (cl.is_tpc ? 1 : 0) << ',' << fmt(cl.zp) << ','
                 << run.nonconverged_lambdas << ',' << active << ",\n";
      } else {
        std::string msg = run.error;
        std::replace(msg.begin(), msg.end(), ',', ';');
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        reps_csv << ",,,,,,,,," << msg << '\n';
      }
    }
  }
  write_text(dir / "replications.csv", reps_csv.str());

  const std::string text = summary_text(c, result);
  write_text(dir / "benchmark_summary.txt", comment + text);
  out << text;
  return kExitOk;
}

}  // namespace

int resolve_threads(int flag_value) {
  if (flag_value >= 0) return flag_value;
  if (const char* env = std::getenv("LMMSEL_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 0 || v > 4096) throw InputError(std::string("invalid LMMSEL_THREADS value '") + env + "'");
    return static_cast<int>(v);
  }
  return 0;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse fixed-effect selection in linear mixed models"};
  app.require_subcommand(1);
  std::string out_dir = ".";
  int threads_flag = -1;

  ScenarioOptions sim_opts;
  CLI::App* sim = app.add_subcommand("simulate", "Simulate a dataset");
  add_scenario_options(sim, sim_opts, true);
  sim->add_option("--out", out_dir, "Output directory (must exist)");

  std::string data_path;
  PenaltyConfig fit_penalty;
  bool fit_standardize = false;
  CLI::App* fit = app.add_subcommand("fit", "Fit at a single lambda");
  fit->add_option("--data", data_path, "Input CSV")->required();
  fit->add_option("--lambda", fit_penalty.lambda, "Regularization strength");
  add_penalty_options(fit, fit_penalty, true);
  fit->add_flag("--standardize", fit_standardize, "Scale covariates to unit standard deviation");
  fit->add_option("--out", out_dir, "Output directory (must exist)");

  GridOptions path_grid;
  PenaltyConfig path_penalty;
  bool path_standardize = false;
  bool path_cold = false;
  CLI::App* path = app.add_subcommand("path", "Regularization path with BIC choice");
  path->add_option("--data", data_path, "Input CSV")->required();
  add_grid_options(path, path_grid);
  add_penalty_options(path, path_penalty, true);
  path->add_flag("--standardize", path_standardize, "Scale covariates to unit standard deviation");
  path->add_flag("--cold", path_cold, "Cold-start every lambda and fit grid points in parallel");
  path->add_option("--threads", threads_flag, "Worker threads (0: runtime default)");
  path->add_option("--out", out_dir, "Output directory (must exist)");

  ScenarioOptions bench_scenario;
  int reps = 20;
  std::uint64_t master_seed = 1;
  std::string methods = "iwr,l1";
  GridOptions bench_grid;
  PenaltyConfig bench_penalty;
  CLI::App* bench = app.add_subcommand("benchmark", "Monte-Carlo selection benchmark");
  add_scenario_options(bench, bench_scenario, false);
  bench->add_option("--reps", reps, "Replications");
  bench->add_option("--seed", master_seed, "Master seed");
  bench->add_option("--methods", methods, "Comma-separated methods (iwr, l1)");
  add_grid_options(bench, bench_grid);
  add_penalty_options(bench, bench_penalty, false);
  bench->add_option("--threads", threads_flag, "Worker threads (0: runtime default)");
  bench->add_option("--out", out_dir, "Output directory (must exist)");

  std::vector<std::string> argv_store{"lmmsel"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_opts, out_dir, out);
    if (fit->parsed()) return cmd_fit(data_path, fit_penalty, fit_standardize, out_dir, out);
    if (path->parsed())
      return cmd_path(data_path, path_grid, path_penalty, path_standardize, path_cold,
                      resolve_threads(threads_flag), out_dir, out);
    if (bench->parsed())
      return cmd_benchmark(bench_scenario, reps, master_seed, methods, bench_grid, bench_penalty,
                           resolve_threads(threads_flag), out_dir, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ConvergenceError& e) {
    err << "not converged: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const DegenerateFitError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNonConvergence;
  }
  return kExitInput;
}

}  // namespace lmmsel::cli
