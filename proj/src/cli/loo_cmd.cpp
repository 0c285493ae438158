#include <cmath>
#include <map>
#include <sstream>

#include "cli/commands.hpp"
#include "dasp/csv.hpp"
#include "dasp/error.hpp"
#include "dasp/loo.hpp"

namespace dasp::cli {

namespace {

using csv::format;

struct LooCliOptions {
  std::string data;
  std::string response = "y";
  bool header = true;
  std::string priors = "hs";
  std::string omegas = "identity,ledoit-wolf";
  std::string sigma_x;
  std::string omega_file;
  bool center = true;
  SamplerOptions sampler;
  std::uint64_t seed = 0;
  int jobs = 1;
  long max_n = 200;
  std::vector<std::string> set;
  std::string out;
};

struct CompareOptions {
  std::string loo;
  std::string out;
};

std::string model_id(const std::string& prior, const std::string& omega) {
  return omega == "identity" ? upper(prior) : upper(prior) + "O[" + omega + "]";
}

void run_loo(const Invocation& inv, LooCliOptions& o, ConfigBinder& binder) {
  binder.apply_config("loo");
  if (o.data.empty()) throw UsageError("--data is required");
  if (o.out.empty()) throw UsageError("--out is required");
  const SeedResolution seed = resolve_seed(binder, "seed", o.seed);

  RunRecord record("loo", inv);
  record.set_config(binder.effective());
  record.add_seed("seed", seed.value, seed.source);
  record.add_input(o.data);
  record.add_input(o.sigma_x);
  record.add_input(o.omega_file);

  const RegressionDataset data = load_dataset(o.data, o.response, o.header);
  const PriorOverrides overrides = parse_overrides(o.set);
  const McmcConfig cfg = make_mcmc_config(o.sampler, seed.value, 1);
  LooOptions lo;
  lo.max_n = o.max_n;
  lo.jobs = o.jobs;

  std::ostringstream ss;
  csv::write_header(ss, "loo", {"model", "prior", "omega_mode", "fold", "elpd_i"});
  json models = json::array();
  for (const auto& prior_name : split_list(o.priors)) {
    const PriorKind kind = parse_prior_kind(prior_name);
    // The hyperparameters are fixed from the full data so every fold uses the same prior.
    const PriorSpec prior = default_spec(kind, data.x, data.y, overrides);
    for (const auto& omega_name : split_list(o.omegas)) {
      const OmegaSpec omega = make_omega_spec(omega_name, o.sigma_x, o.omega_file, o.center);
      const LooResult res = loo_exact(data, prior, omega, cfg, lo);
      const std::string id = model_id(to_string(kind), omega_mode_name(omega));
      for (Eigen::Index i = 0; i < res.pointwise.size(); ++i) {
        csv::write_row(ss, {id, to_string(kind), omega_mode_name(omega), std::to_string(i + 1),
                            format(res.pointwise(i))});
      }
      models.push_back({{"model", id},
                        {"prior_spec", to_json(prior)},
                        {"omega_mode", omega_mode_name(omega)},
                        {"elpd_loo", res.elpd_loo},
                        {"failed_folds", res.failed_folds},
                        {"flagged", res.flagged}});
      inv.out << id << ": elpd_loo " << res.elpd_loo << (res.flagged ? " (some folds failed)" : "") << "\n";
    }
  }
  record.details()["models"] = models;
  record.details()["mcmc"] = to_json(cfg);
  write_atomic(o.out, ss.str());
  record.add_output(o.out);
  write_manifest(manifest_path_for_file(o.out), record);
}

struct LooModel {
  std::string prior;
  std::string omega;
  LooResult result;
};

std::vector<std::pair<std::string, LooModel>> read_loo(const std::string& path) {
  const csv::TextTable t = csv::read_text(path);
  const Eigen::Index c_model = t.column("model");
  const Eigen::Index c_prior = t.column("prior");
  const Eigen::Index c_omega = t.column("omega_mode");
  const Eigen::Index c_fold = t.column("fold");
  const Eigen::Index c_value = t.column("elpd_i");

  std::vector<std::pair<std::string, LooModel>> models;
  std::map<std::string, std::vector<std::pair<long, double>>> folds;
  for (const auto& row : t.rows) {
    const std::string& id = row[std::size_t(c_model)];
    if (!folds.count(id)) {
      models.push_back({id, LooModel{row[std::size_t(c_prior)], row[std::size_t(c_omega)], {}}});
    }
    folds[id].push_back({long(csv::to_number(row[std::size_t(c_fold)])), csv::to_number(row[std::size_t(c_value)])});
  }
  if (models.empty()) throw Error(ErrorKind::MissingColumns, "'" + path + "' has no LOO rows");
  for (auto& [id, model] : models) {
    auto& f = folds[id];
    std::sort(f.begin(), f.end());
    LooResult& r = model.result;
    r.pointwise.resize(Eigen::Index(f.size()));
    for (std::size_t k = 0; k < f.size(); ++k) {
      r.pointwise(Eigen::Index(k)) = f[k].second;
      if (std::isnan(f[k].second)) {
        r.failed_folds.push_back(Eigen::Index(k));
        r.flagged = true;
      } else {
        r.elpd_loo += f[k].second;
      }
    }
  }
  return models;
}

}  // namespace

/// Rows of the LOO comparison table: every model against the one with the
/// highest elpd_loo.
std::string loo_comparison_csv(const std::string& loo_path, std::ostream* text) {
  const auto models = read_loo(loo_path);
  std::size_t best = 0;
  for (std::size_t k = 1; k < models.size(); ++k) {
    if (models[k].second.result.elpd_loo > models[best].second.result.elpd_loo) best = k;
  }
  std::ostringstream ss;
  csv::write_header(ss, "loo_compare",
                    {"model", "prior", "omega_mode", "elpd_loo", "delta_elpd", "se", "n_used", "failed_folds"});
  for (const auto& [id, m] : models) {
    const LooComparison cmp = compare(m.result, models[best].second.result);
    csv::write_row(ss, {id, m.prior, m.omega, format(m.result.elpd_loo), format(cmp.delta_elpd), format(cmp.se),
                        std::to_string(cmp.n_used), std::to_string(m.result.failed_folds.size())});
    if (text) {
      *text << id << ": elpd_loo " << m.result.elpd_loo << ", delta " << cmp.delta_elpd << " (se " << cmp.se
            << ")\n";
    }
  }
  return ss.str();
}

namespace {

void run_compare(const Invocation& inv, CompareOptions& o, ConfigBinder& binder) {
  binder.apply_config("compare");
  if (o.loo.empty()) throw UsageError("--loo is required");
  RunRecord record("compare", inv);
  record.set_config(binder.effective());
  record.add_input(o.loo);
  const std::string table = loo_comparison_csv(o.loo, &inv.out);
  if (!o.out.empty()) {
    write_atomic(o.out, table);
    record.add_output(o.out);
    write_manifest(manifest_path_for_file(o.out), record);
  }
}

}  // namespace

void add_loo_commands(CLI::App& root, Registry& registry) {
  {
    CLI::App* app = root.add_subcommand("loo", "Exact leave-one-out cross-validation");
    auto o = std::make_shared<LooCliOptions>();
    auto binder = std::make_shared<ConfigBinder>(app);
    binder->option("--data", "data", o->data, "CSV with the response and predictor columns");
    binder->option("--response", "response", o->response, "Name of the response column");
    binder->option("--header,!--no-header", "header", o->header, "CSV has a header line (default on)");
    binder->option("--priors", "priors", o->priors, "Prior kinds, comma separated");
    binder->option("--omegas", "omegas", o->omegas, "Omega modes, comma separated");
    binder->option("--sigma-x", "sigma_x", o->sigma_x, "Known predictor covariance CSV (known, direct)");
    binder->option("--omega-file", "omega_file", o->omega_file, "Correlation matrix CSV (user)");
    binder->option("--center,!--no-center", "center", o->center, "Center columns before estimating Omega");
    add_sampler_options(*binder, o->sampler);
    binder->option("--seed", "seed", o->seed, "Master seed; fold seeds derive from it");
    binder->option("--jobs", "jobs", o->jobs, "Folds run in parallel on this many threads")
        ->check(CLI::PositiveNumber);
    binder->option("--max-n", "max_n", o->max_n, "Refuse data sets with more rows than this");
    binder->option("--set", "set", o->set, "Prior hyperparameter override key=value (repeatable)");
    binder->option("--out", "out", o->out, "Output CSV of per-fold contributions");
    registry.push_back({app, [o, binder](const Invocation& inv) { run_loo(inv, *o, *binder); }});
  }
  {
    CLI::App* app = root.add_subcommand("compare", "Compare LOO results against the best model");
    auto o = std::make_shared<CompareOptions>();
    auto binder = std::make_shared<ConfigBinder>(app);
    binder->option("--loo", "loo", o->loo, "CSV written by `dasp loo`");
    binder->option("--out", "out", o->out, "Optional output CSV");
    registry.push_back({app, [o, binder](const Invocation& inv) { run_compare(inv, *o, *binder); }});
  }
}

}  // namespace dasp::cli
