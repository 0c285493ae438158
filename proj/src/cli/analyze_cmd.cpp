#include <sstream>

#include "cli/commands.hpp"
#include "dasp/corr_structures.hpp"
#include "dasp/csv.hpp"
#include "dasp/metrics.hpp"
#include "dasp/prior_analytics.hpp"

namespace dasp::cli {

namespace {

using csv::format;

struct KlOptions {
  std::string structure = "bma1";
  std::string dims = "10,20,50";
  std::string rho_grid = "0:0.95:0.05";
  int block = 5;
  std::string ma_form = "process";
  std::string out;
};

struct ContourOptions {
  std::string priors = "hs";
  std::string rho = "0,0.5,0.9";
  long draws = 100000;
  int bins = 200;
  double lo = -6.0;
  double hi = 6.0;
  std::string slices;
  double window = 0.02;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::vector<std::string> set;
  std::string out;
};

struct MeffOptions {
  std::string priors = "hs";
  long p = 100;
  std::string rho = "0,0.5,0.9";
  std::string structure = "equicorrelation";
  int block = 5;
  std::string ma_form = "process";
  long draws = 20000;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::vector<std::string> set;
  std::string out;
};

std::vector<PriorKind> parse_priors(const std::string& text) {
  std::vector<PriorKind> out;
  for (const auto& name : split_list(text)) out.push_back(parse_prior_kind(name));
  if (out.empty()) throw UsageError("--prior needs at least one prior kind");
  return out;
}

std::vector<long> parse_dims(const std::string& text) {
  std::vector<long> out;
  for (double d : parse_grid(text)) {
    if (d < 1 || d != std::floor(d)) throw UsageError("dimensions must be positive integers");
    out.push_back(long(d));
  }
  return out;
}

void require_out(const std::string& out) {
  if (out.empty()) throw UsageError("--out is required");
}

void finish_file(const std::string& out, const std::string& content, RunRecord& record) {
  write_atomic(out, content);
  record.add_output(out);
  write_manifest(manifest_path_for_file(out), record);
}

void run_kl(const Invocation& inv, KlOptions& o, ConfigBinder& binder) {
  binder.apply_config("analyze kl-curve");
  require_out(o.out);
  const auto dims = parse_dims(o.dims);
  const auto rhos = parse_grid(o.rho_grid);
  const MaForm form = parse_ma_form(o.ma_form);

  std::ostringstream ss;
  csv::write_header(ss, "kl_curve", {"structure", "dim", "rho", "kl"});
  for (const auto& name : split_list(o.structure)) {
    const StructureKind kind = parse_structure_kind(name);
    for (long dim : dims) {
      for (double rho : rhos) {
        const CorrelationMatrix omega = make_structure({kind, rho, o.block, form, BlockPolicy::AllowPartial}, dim);
        csv::write_row(ss, {to_string(kind), std::to_string(dim), format(rho), format(kl_prior(omega))});
      }
    }
  }
  RunRecord record("analyze kl-curve", inv);
  record.set_config(binder.effective());
  finish_file(o.out, ss.str(), record);
}

void run_contours(const Invocation& inv, ContourOptions& o, ConfigBinder& binder) {
  binder.apply_config("analyze contours");
  require_out(o.out);
  const SeedResolution seed = resolve_seed(binder, "seed", o.seed);
  const auto priors = parse_priors(o.priors);
  const auto rhos = parse_grid(o.rho);
  const std::vector<double> slices = o.slices.empty() ? std::vector<double>{} : parse_grid(o.slices);
  const PriorOverrides overrides = parse_overrides(o.set);
  if (o.draws < 1 || o.bins < 1 || !(o.hi > o.lo)) throw UsageError("need draws >= 1, bins >= 1 and hi > lo");
  const GridSpec grid{o.bins, o.lo, o.hi};

  RunRecord record("analyze contours", inv);
  record.set_config(binder.effective());
  record.add_seed("seed", seed.value, seed.source);

  std::ostringstream ss;
  csv::write_header(ss, "contours", {"prior", "rho", "panel", "b1", "b2", "count"});
  json runs = json::array();
  for (std::size_t a = 0; a < priors.size(); ++a) {
    const PriorSpec spec = normal_means_spec(priors[a], 2, overrides);
    for (std::size_t r = 0; r < rhos.size(); ++r) {
      const CorrelationMatrix omega = make_structure({StructureKind::Equicorrelation, rhos[r]}, 2);
      const std::uint64_t s = derive_seed(seed.value, (a << 16) + r);
      const PriorGrid pg = mc_prior_grid(spec, omega, o.draws, grid, s, o.jobs);
      const std::string prior_name = to_string(priors[a]);
      const std::string rho_text = format(rhos[r]);
      for (int i = 0; i < grid.bins; ++i) {
        for (int j = 0; j < grid.bins; ++j) {
          csv::write_row(ss, {prior_name, rho_text, "joint", format(grid.center(i)), format(grid.center(j)),
                              format(pg.counts(i, j))});
        }
      }
      json slice_info = json::array();
      for (double b2 : slices) {
        const ConditionalSlice cs = conditional_slice(pg, b2, o.window);
        for (int i = 0; i < grid.bins; ++i) {
          csv::write_row(ss, {prior_name, rho_text, "slice", format(grid.center(i)), format(b2), format(cs.counts(i))});
        }
        slice_info.push_back({{"b2", b2}, {"half_window", cs.half_window}, {"n_in_window", cs.n_in_window}});
      }
      runs.push_back({{"prior", prior_name}, {"rho", rhos[r]}, {"seed", s}, {"outside", pg.outside},
                      {"slices", slice_info}, {"prior_spec", to_json(spec)}});
    }
  }
  record.details()["runs"] = runs;
  finish_file(o.out, ss.str(), record);
}

void run_meff(const Invocation& inv, MeffOptions& o, ConfigBinder& binder) {
  binder.apply_config("analyze meff");
  require_out(o.out);
  const SeedResolution seed = resolve_seed(binder, "seed", o.seed);
  const auto priors = parse_priors(o.priors);
  const auto rhos = parse_grid(o.rho);
  const PriorOverrides overrides = parse_overrides(o.set);
  const StructureKind kind = parse_structure_kind(o.structure);
  const MaForm form = parse_ma_form(o.ma_form);
  if (o.p < 1 || o.draws < 1) throw UsageError("need p >= 1 and draws >= 1");

  RunRecord record("analyze meff", inv);
  record.set_config(binder.effective());
  record.add_seed("seed", seed.value, seed.source);

  std::ostringstream ss;
  csv::write_header(ss, "meff", {"prior", "rho", "draw", "meff"});
  json runs = json::array();
  for (std::size_t a = 0; a < priors.size(); ++a) {
    const PriorSpec spec = normal_means_spec(priors[a], o.p, overrides);
    for (std::size_t r = 0; r < rhos.size(); ++r) {
      const CorrelationMatrix omega = make_structure({kind, rhos[r], o.block, form, BlockPolicy::AllowPartial}, o.p);
      const std::uint64_t s = derive_seed(seed.value, (a << 16) + r);
      const Eigen::VectorXd m = mc_meff(spec, omega, o.draws, s, o.jobs);
      const std::string prior_name = to_string(priors[a]);
      const std::string rho_text = format(rhos[r]);
      for (Eigen::Index k = 0; k < m.size(); ++k) {
        csv::write_row(ss, {prior_name, rho_text, std::to_string(k + 1), format(m(k))});
      }
      std::vector<double> v(m.data(), m.data() + m.size());
      runs.push_back({{"prior", prior_name},
                      {"rho", rhos[r]},
                      {"seed", s},
                      {"quantiles", {{"0.1", quantile(v, 0.1)}, {"0.5", quantile(v, 0.5)}, {"0.9", quantile(v, 0.9)}}},
                      {"prior_spec", to_json(spec)}});
    }
  }
  record.details()["runs"] = runs;
  finish_file(o.out, ss.str(), record);
}

}  // namespace

void add_analyze_commands(CLI::App& root, Registry& registry) {
  CLI::App* analyze = root.add_subcommand("analyze", "Closed-form and Monte Carlo prior analytics");
  analyze->require_subcommand(1);

  {
    CLI::App* app = analyze->add_subcommand("kl-curve", "KL divergence of the Omega prior from the Omega = I prior");
    auto o = std::make_shared<KlOptions>();
    auto binder = std::make_shared<ConfigBinder>(app);
    binder->option("--structure", "structure", o->structure, "Structure kind(s), comma separated");
    binder->option("--dims", "dims", o->dims, "Dimensions, comma separated or lo:hi:step");
    binder->option("--rho-grid", "rho_grid", o->rho_grid, "rho values, lo:hi:step or comma separated");
    binder->option("--block", "block", o->block, "Block size for blocked kinds")->check(CLI::PositiveNumber);
    binder->option("--ma-form", "ma_form", o->ma_form, "process or banded");
    binder->option("--out", "out", o->out, "Output CSV");
    registry.push_back({app, [o, binder](const Invocation& inv) { run_kl(inv, *o, *binder); }});
  }
  {
    CLI::App* app = analyze->add_subcommand("contours", "Monte Carlo joint prior of (b1, b2) with equicorrelated Omega");
    auto o = std::make_shared<ContourOptions>();
    auto binder = std::make_shared<ConfigBinder>(app);
    binder->option("--prior", "prior", o->priors, "Prior kind(s), comma separated");
    binder->option("--rho", "rho", o->rho, "rho values");
    binder->option("--draws", "draws", o->draws, "Monte Carlo draws per (prior, rho)");
    binder->option("--bins", "bins", o->bins, "Histogram bins per axis");
    binder->option("--lo", "lo", o->lo, "Grid lower edge");
    binder->option("--hi", "hi", o->hi, "Grid upper edge");
    binder->option("--slices", "slices", o->slices, "b2 values for conditional slices p(b1 | b2)");
    binder->option("--window", "window", o->window, "Slice half-window as a fraction of hi - lo");
    binder->option("--seed", "seed", o->seed, "Master seed (default: DASP_SEED, then 0)");
    binder->option("--jobs", "jobs", o->jobs, "Worker threads")->check(CLI::PositiveNumber);
    binder->option("--set", "set", o->set, "Prior hyperparameter override key=value");
    binder->option("--out", "out", o->out, "Output CSV");
    registry.push_back({app, [o, binder](const Invocation& inv) { run_contours(inv, *o, *binder); }});
  }
  {
    CLI::App* app = analyze->add_subcommand("meff", "Prior draws of the effective number of parameters, X = I");
    auto o = std::make_shared<MeffOptions>();
    auto binder = std::make_shared<ConfigBinder>(app);
    binder->option("--prior", "prior", o->priors, "Prior kind(s), comma separated");
    binder->option("--p", "p", o->p, "Number of coefficients");
    binder->option("--rho", "rho", o->rho, "rho values");
    binder->option("--structure", "structure", o->structure, "Omega structure (default equicorrelation)");
    binder->option("--block", "block", o->block, "Block size for blocked kinds")->check(CLI::PositiveNumber);
    binder->option("--ma-form", "ma_form", o->ma_form, "process or banded");
    binder->option("--draws", "draws", o->draws, "Monte Carlo draws per (prior, rho)");
    binder->option("--seed", "seed", o->seed, "Master seed (default: DASP_SEED, then 0)");
    binder->option("--jobs", "jobs", o->jobs, "Worker threads")->check(CLI::PositiveNumber);
    binder->option("--set", "set", o->set, "Prior hyperparameter override key=value");
    binder->option("--out", "out", o->out, "Output CSV");
    registry.push_back({app, [o, binder](const Invocation& inv) { run_meff(inv, *o, *binder); }});
  }
}

}  // namespace dasp::cli
