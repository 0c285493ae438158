#include <cmath>
#include <sstream>

#include "cli/commands.hpp"
#include "dasp/csv.hpp"
#include "dasp/diagnostics.hpp"
#include "dasp/metrics.hpp"
#include "dasp/sampler.hpp"

namespace dasp::cli {

namespace {

using csv::format;

struct FitOptions {
  std::string data;
  std::string response = "y";
  bool header = true;
  std::string prior = "hs";
  std::string omega = "identity";
  std::string sigma_x;
  std::string omega_file;
  bool center = true;
  SamplerOptions sampler;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::vector<std::string> set;
  bool log_lik = false;
  std::string out;
};

std::string opt_text(const std::optional<double>& v) { return v ? format(*v) : "nan"; }

std::string draws_csv(const PosteriorDraws& draws, const std::vector<std::string>& names) {
  std::ostringstream ss;
  csv::write_header(ss, "draws", {"chain", "iter", "parameter", "value"});
  for (int c = 0; c < draws.n_chains(); ++c) {
    const ChainDraws& ch = draws.chains[std::size_t(c)];
    const std::string chain = std::to_string(c + 1);
    for (Eigen::Index s = 0; s < ch.b.rows(); ++s) {
      const std::string iter = std::to_string(s + 1);
      for (Eigen::Index j = 0; j < ch.b.cols(); ++j) {
        csv::write_row(ss, {chain, iter, "b[" + names[std::size_t(j)] + "]", format(ch.b(s, j))});
      }
      for (Eigen::Index j = 0; j < ch.lambda.cols(); ++j) {
        csv::write_row(ss, {chain, iter, "lambda[" + names[std::size_t(j)] + "]", format(ch.lambda(s, j))});
      }
      csv::write_row(ss, {chain, iter, "tau", format(ch.tau(s))});
      csv::write_row(ss, {chain, iter, "sigma", format(ch.sigma(s))});
      csv::write_row(ss, {chain, iter, "intercept", format(ch.intercept(s))});
    }
  }
  return ss.str();
}

std::string log_lik_csv(const PosteriorDraws& draws) {
  std::ostringstream ss;
  csv::write_header(ss, "log_lik", {"chain", "iter", "obs", "value"});
  for (int c = 0; c < draws.n_chains(); ++c) {
    const ChainDraws& ch = draws.chains[std::size_t(c)];
    for (Eigen::Index s = 0; s < ch.log_lik.rows(); ++s) {
      for (Eigen::Index i = 0; i < ch.log_lik.cols(); ++i) {
        csv::write_row(ss, {std::to_string(c + 1), std::to_string(s + 1), std::to_string(i + 1),
                            format(ch.log_lik(s, i))});
      }
    }
  }
  return ss.str();
}

std::string diagnostics_csv(const Diagnostics& diag, const std::vector<std::string>& names) {
  std::ostringstream ss;
  csv::write_header(ss, "diagnostics", {"parameter", "rhat", "ess_bulk"});
  for (const auto& pd : diag.parameters) {
    std::string name = pd.name;
    // diagnose() labels coefficients b[1]..b[p]; use column names instead.
    if (name.rfind("b[", 0) == 0) {
      const std::size_t j = std::stoul(name.substr(2, name.size() - 3));
      if (j >= 1 && j <= names.size()) name = "b[" + names[j - 1] + "]";
    }
    csv::write_row(ss, {name, opt_text(pd.rhat), opt_text(pd.ess_bulk)});
  }
  return ss.str();
}

std::string summary_csv(const PosteriorDraws& draws, const std::vector<std::string>& names) {
  std::ostringstream ss;
  csv::write_header(ss, "summary", {"parameter", "mean", "sd", "q2.5", "q50", "q97.5"});
  auto row = [&](const std::string& name, const Eigen::VectorXd& v) {
    const double mean = v.mean();
    const double sd = v.size() > 1 ? std::sqrt((v.array() - mean).square().sum() / double(v.size() - 1)) : 0.0;
    std::vector<double> values(v.data(), v.data() + v.size());
    csv::write_row(ss, {name, format(mean), format(sd), format(quantile(values, 0.025)),
                        format(quantile(values, 0.5)), format(quantile(values, 0.975))});
  };
  const Eigen::MatrixXd b = draws.stacked_b();
  for (Eigen::Index j = 0; j < b.cols(); ++j) row("b[" + names[std::size_t(j)] + "]", b.col(j));
  row("sigma", draws.stacked_sigma());
  row("intercept", draws.stacked_intercept());
  return ss.str();
}

void run_fit(const Invocation& inv, FitOptions& o, ConfigBinder& binder) {
  binder.apply_config("fit");
  if (o.data.empty()) throw UsageError("--data is required");
  if (o.out.empty()) throw UsageError("--out is required");
  const SeedResolution seed = resolve_seed(binder, "seed", o.seed);
  if (o.sampler.draws < 100) inv.err << "warning: fewer than 100 draws per chain; diagnostics are unreliable\n";

  RunRecord record("fit", inv);
  record.set_config(binder.effective());
  record.add_seed("seed", seed.value, seed.source);
  record.add_input(o.data);
  record.add_input(o.sigma_x);
  record.add_input(o.omega_file);

  std::vector<std::string> names;
  const RegressionDataset data = load_dataset(o.data, o.response, o.header, &names);
  const PriorSpec prior = default_spec(parse_prior_kind(o.prior), data.x, data.y, parse_overrides(o.set));
  const OmegaSpec omega = make_omega_spec(o.omega, o.sigma_x, o.omega_file, o.center);
  const McmcConfig cfg = make_mcmc_config(o.sampler, seed.value, o.jobs);

  PosteriorDraws draws = fit(data, prior, omega, cfg);
  draws.manifest["data_id"] = sha256_file(o.data);
  const Diagnostics diag = diagnose(draws);

  const std::filesystem::path dir(o.out);
  ensure_directory(dir);
  write_atomic(dir / "draws.csv", draws_csv(draws, names));
  record.add_output(dir / "draws.csv");
  write_atomic(dir / "diagnostics.csv", diagnostics_csv(diag, names));
  record.add_output(dir / "diagnostics.csv");
  write_atomic(dir / "summary.csv", summary_csv(draws, names));
  record.add_output(dir / "summary.csv");
  if (o.log_lik) {
    write_atomic(dir / "log_lik.csv", log_lik_csv(draws));
    record.add_output(dir / "log_lik.csv");
  }

  json chains = json::array();
  for (const auto& ch : draws.chains) {
    chains.push_back({{"clamp_hits", ch.clamp_hits}, {"sigma_accept", ch.sigma_accept}, {"sigma_step", ch.sigma_step}});
  }
  std::vector<bool> stuck = diag.stuck_chains;
  auto& details = record.details();
  details["predictors"] = names;
  details["sampler"] = draws.manifest;
  details["chains"] = chains;
  details["diagnostics"] = {{"max_rhat", diag.max_rhat()}, {"min_ess", diag.min_ess()}, {"stuck_chains", stuck}};
  write_manifest(dir / "manifest.json", record);

  inv.out << "fit: " << data.n() << " rows, " << data.p() << " predictors, prior " << to_string(prior.kind())
          << ", omega " << omega_mode_name(omega) << "; max R-hat " << diag.max_rhat() << ", min ESS "
          << diag.min_ess() << "\n";
}

}  // namespace

void add_fit_command(CLI::App& root, Registry& registry) {
  CLI::App* app = root.add_subcommand("fit", "Run the Gibbs sampler on a data set");
  auto o = std::make_shared<FitOptions>();
  auto binder = std::make_shared<ConfigBinder>(app);
  binder->option("--data", "data", o->data, "CSV with the response and predictor columns");
  binder->option("--response", "response", o->response, "Name of the response column");
  binder->option("--header,!--no-header", "header", o->header, "CSV has a header line (default on)");
  binder->option("--prior", "prior", o->prior, "bp|dl|hs|rhs|ng|r2d2");
  binder->option("--omega", "omega", o->omega, "identity|sample|ledoit-wolf|known|direct|user");
  binder->option("--sigma-x", "sigma_x", o->sigma_x, "Known predictor covariance CSV (known, direct)");
  binder->option("--omega-file", "omega_file", o->omega_file, "Correlation matrix CSV (user)");
  binder->option("--center,!--no-center", "center", o->center, "Center columns before estimating Omega");
  add_sampler_options(*binder, o->sampler);
  binder->option("--seed", "seed", o->seed, "Sampler seed (default: DASP_SEED, then 0)");
  binder->option("--jobs", "jobs", o->jobs, "Chains run in parallel on this many threads")
      ->check(CLI::PositiveNumber);
  binder->option("--set", "set", o->set, "Prior hyperparameter override key=value (repeatable)");
  binder->option("--log-lik", "log_lik", o->log_lik, "Also write pointwise log-likelihood draws");
  binder->option("--out", "out", o->out, "Output directory");
  registry.push_back({app, [o, binder](const Invocation& inv) { run_fit(inv, *o, *binder); }});
}

}  // namespace dasp::cli
