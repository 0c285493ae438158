#include <fstream>
#include <mutex>
#include <sstream>

#include "cli/commands.hpp"
#include "dasp/csv.hpp"
#include "dasp/diagnostics.hpp"
#include "dasp/error.hpp"
#include "dasp/metrics.hpp"
#include "dasp/parallel.hpp"
#include "dasp/sim_harness.hpp"

namespace dasp::cli {

namespace {

using csv::format;

struct SimulateOptions {
  std::string scenario;
  std::string priors = "hs";
  std::string omegas = "identity,true";
  int reps = 10;
  SamplerOptions sampler;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::vector<std::string> set;
  bool roc = true;
  std::string out;
};

struct FitOutcome {
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<RocPoint> roc;
  json manifest;
};

std::string canonical_omega(const std::string& name) {
  if (name == "known" || name == "true") return "true";
  if (name == "lw" || name == "ledoit-wolf") return "ledoit-wolf";
  if (name == "identity" || name == "direct" || name == "sample") return name;
  throw UsageError("simulate: unknown omega mode '" + name + "' (identity|true|direct|sample|ledoit-wolf)");
}

OmegaSpec scenario_omega(const std::string& name, const RegressionDataset& train) {
  OmegaSpec spec;
  if (name == "identity") spec.mode = IdentityOmega{};
  else if (name == "true") spec.mode = KnownCovariance{*train.sigma_x_true};
  else if (name == "direct") spec.mode = DirectCovariance{*train.sigma_x_true};
  else if (name == "sample") spec.mode = SampleCovOmega{};
  else spec.mode = LedoitWolfOmega{};
  return spec;
}

double or_nan(const std::optional<double>& v) { return v ? *v : std::nan(""); }

FitOutcome run_one(const SimulatedScenario& sc, PriorKind kind, const std::string& omega_name,
                   const PriorOverrides& overrides, const McmcConfig& cfg, const std::string& data_id, bool want_roc) {
  const PriorSpec prior = default_spec(kind, sc.train.x, sc.train.y, overrides);
  const OmegaSpec spec = scenario_omega(omega_name, sc.train);
  const CorrelationMatrix omega = build_omega(sc.train.x, spec);
  PosteriorDraws draws = fit_with_omega(sc.train, prior, omega, cfg);
  draws.manifest["data_id"] = data_id;
  draws.manifest["omega_mode"] = omega_name;

  const MetricsReport m = compute_metrics(draws, sc.train, sc.test, omega);
  const Diagnostics diag = diagnose(draws);
  long stuck = 0;
  for (bool s : diag.stuck_chains) stuck += s ? 1 : 0;

  FitOutcome out;
  out.metrics = {{"elpd", m.elpd},
                 {"rmse_all", m.rmse.all},
                 {"rmse_zero", or_nan(m.rmse.zero)},
                 {"rmse_nonzero", or_nan(m.rmse.nonzero)},
                 {"coverage", m.coverage.coverage},
                 {"avg_ci_width", m.coverage.avg_width},
                 {"sensitivity", or_nan(m.coverage.sensitivity)},
                 {"specificity", or_nan(m.coverage.specificity)},
                 {"coverage_zero", or_nan(m.coverage.coverage_zero)},
                 {"coverage_nonzero", or_nan(m.coverage.coverage_nonzero)},
                 {"meff", m.meff_posterior_mean},
                 {"max_rhat", diag.max_rhat()},
                 {"min_ess", diag.min_ess()},
                 {"stuck_chains", double(stuck)}};
  const Eigen::VectorXd& b = *sc.train.b_true;
  const bool has_both = (b.array() == 0.0).any() && (b.array() != 0.0).any();
  if (want_roc && has_both) out.roc = roc_curve(draws.stacked_b(), b, default_roc_levels());
  out.manifest = draws.manifest;
  return out;
}

void run_simulate(const Invocation& inv, SimulateOptions& o, ConfigBinder& binder) {
  binder.apply_config("simulate");
  if (o.out.empty()) throw UsageError("--out is required");
  if (o.reps < 1) throw UsageError("--reps must be positive");
  const SeedResolution seed = resolve_seed(binder, "seed", o.seed);

  RunRecord record("simulate", inv);
  record.set_config(binder.effective());
  record.add_seed("seed", seed.value, seed.source);

  ScenarioSpec base;
  bool scenario_has_seed = false;
  if (!o.scenario.empty()) {
    record.add_input(o.scenario);
    std::ifstream in(o.scenario);
    if (!in) throw UsageError("cannot open scenario '" + o.scenario + "'");
    const json j = json::parse(in);
    base = scenario_from_json(j);
    scenario_has_seed = j.contains("seed");
  }
  const std::uint64_t data_seed = scenario_has_seed ? base.seed : seed.value;

  std::vector<PriorKind> priors;
  for (const auto& name : split_list(o.priors)) priors.push_back(parse_prior_kind(name));
  std::vector<std::string> omegas;
  for (const auto& name : split_list(o.omegas)) omegas.push_back(canonical_omega(name));
  if (priors.empty() || omegas.empty()) throw UsageError("need at least one prior and one omega mode");
  const PriorOverrides overrides = parse_overrides(o.set);

  std::vector<SimulatedScenario> scenarios(static_cast<std::size_t>(o.reps));
  std::vector<ScenarioSpec> specs(static_cast<std::size_t>(o.reps), base);
  for (int r = 0; r < o.reps; ++r) {
    specs[std::size_t(r)].seed = data_seed + std::uint64_t(r);
    if (base.test_seed) specs[std::size_t(r)].test_seed = *base.test_seed + std::uint64_t(r);
  }
  parallel_for(o.reps, o.jobs, [&](long r) { scenarios[std::size_t(r)] = generate(specs[std::size_t(r)]); });

  const long n_tasks = long(o.reps) * long(priors.size()) * long(omegas.size());
  std::vector<FitOutcome> outcomes(static_cast<std::size_t>(n_tasks));
  std::mutex log_mutex;
  auto decode = [&](long t) {
    const long m = t % long(omegas.size());
    const long a = (t / long(omegas.size())) % long(priors.size());
    const long r = t / (long(omegas.size()) * long(priors.size()));
    return std::tuple<long, long, long>{r, a, m};
  };
  parallel_for(n_tasks, o.jobs, [&](long t) {
    const auto [r, a, m] = decode(t);
    const McmcConfig cfg = make_mcmc_config(o.sampler, derive_seed(seed.value, std::uint64_t(r)), 1);
    const std::string data_id = "rep" + std::to_string(r + 1) + "/seed" + std::to_string(specs[std::size_t(r)].seed);
    outcomes[std::size_t(t)] = run_one(scenarios[std::size_t(r)], priors[std::size_t(a)], omegas[std::size_t(m)],
                                       overrides, cfg, data_id, o.roc);
    std::lock_guard<std::mutex> lock(log_mutex);
    inv.err << "simulate: rep " << r + 1 << " " << to_string(priors[std::size_t(a)]) << " "
            << omegas[std::size_t(m)] << " done\n";
  });

  std::ostringstream results;
  std::ostringstream roc;
  csv::write_header(results, "sim_results", {"rep", "prior", "omega_mode", "metric", "value"});
  csv::write_header(roc, "sim_roc", {"rep", "prior", "omega_mode", "level", "fpr", "tpr"});
  json fits = json::array();
  for (long t = 0; t < n_tasks; ++t) {
    const auto [r, a, m] = decode(t);
    const std::string rep = std::to_string(r + 1);
    const std::string prior = to_string(priors[std::size_t(a)]);
    const std::string& omega = omegas[std::size_t(m)];
    const FitOutcome& fo = outcomes[std::size_t(t)];
    for (const auto& [metric, value] : fo.metrics) csv::write_row(results, {rep, prior, omega, metric, format(value)});
    for (const auto& pt : fo.roc) {
      csv::write_row(roc, {rep, prior, omega, format(pt.level), format(pt.fpr), format(pt.tpr)});
    }
    fits.push_back({{"rep", r + 1}, {"prior", prior}, {"omega_mode", omega}, {"manifest", fo.manifest}});
  }

  const std::filesystem::path dir(o.out);
  ensure_directory(dir);
  write_atomic(dir / "results.csv", results.str());
  record.add_output(dir / "results.csv");
  if (o.roc) {
    write_atomic(dir / "roc.csv", roc.str());
    record.add_output(dir / "roc.csv");
  }
  write_atomic(dir / "fits.json", fits.dump(1) + "\n");
  record.add_output(dir / "fits.json");

  json reps = json::array();
  for (int r = 0; r < o.reps; ++r) {
    reps.push_back({{"rep", r + 1},
                    {"data_seed", specs[std::size_t(r)].seed},
                    {"mcmc_seed", derive_seed(seed.value, std::uint64_t(r))},
                    {"degenerate", scenarios[std::size_t(r)].degenerate}});
  }
  record.details()["scenario"] = to_json(base);
  record.details()["replications"] = reps;
  write_manifest(dir / "manifest.json", record);
  inv.out << "simulate: " << n_tasks << " fits written to " << dir.string() << "\n";
}

}  // namespace

void add_simulate_command(CLI::App& root, Registry& registry) {
  CLI::App* app = root.add_subcommand("simulate", "Paired simulation study: each prior with and without Omega");
  auto o = std::make_shared<SimulateOptions>();
  auto binder = std::make_shared<ConfigBinder>(app);
  binder->option("--scenario", "scenario", o->scenario, "Scenario JSON (defaults are used for missing fields)");
  binder->option("--priors", "priors", o->priors, "Prior kinds, comma separated");
  binder->option("--omegas", "omegas", o->omegas, "identity,true,direct,sample,ledoit-wolf");
  binder->option("--reps", "reps", o->reps, "Replications");
  add_sampler_options(*binder, o->sampler);
  binder->option("--seed", "seed", o->seed, "Master seed (default: DASP_SEED, then 0)");
  binder->option("--jobs", "jobs", o->jobs, "Fits run in parallel on this many threads")->check(CLI::PositiveNumber);
  binder->option("--set", "set", o->set, "Prior hyperparameter override key=value (repeatable)");
  binder->option("--roc,!--no-roc", "roc", o->roc, "Write ROC points (default on)");
  binder->option("--out", "out", o->out, "Output directory");
  registry.push_back({app, [o, binder](const Invocation& inv) { run_simulate(inv, *o, *binder); }});
}

}  // namespace dasp::cli
