#include <sstream>

#include "cli/commands.hpp"
#include "dasp/corr_structures.hpp"
#include "dasp/cov_estimation.hpp"
#include "dasp/csv.hpp"

namespace dasp::cli {

namespace {

struct GenerateOptions {
  std::string kind;
  double rho = 0.0;
  long dim = 0;
  int block = 5;
  std::string ma_form = "process";
  bool strict_blocks = false;
  std::string out;
};

struct EstimateOptions {
  std::string data;
  bool header = false;
  std::string mode = "ledoit-wolf";
  std::string sigma_x;
  bool center = true;
  std::string out;
};

std::string matrix_csv(const Eigen::MatrixXd& m) {
  std::ostringstream ss;
  ss << "# schema: dasp.matrix.v1\n";
  csv::write_matrix(ss, m);
  return ss.str();
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

void run_generate(const Invocation& inv, GenerateOptions& o, ConfigBinder& binder) {
  binder.apply_config("omega generate");
  if (o.kind.empty()) throw UsageError("--kind is required");
  if (o.dim < 1) throw UsageError("--dim must be a positive integer");
  if (o.out.empty()) throw UsageError("--out is required");

  StructureSpec spec;
  spec.kind = parse_structure_kind(o.kind);
  spec.rho = o.rho;
  spec.block_size = o.block;
  spec.ma_form = parse_ma_form(o.ma_form);
  spec.block_policy = o.strict_blocks ? BlockPolicy::Strict : BlockPolicy::AllowPartial;
  const CorrelationMatrix omega = make_structure(spec, o.dim);

  RunRecord record("omega generate", inv);
  record.set_config(binder.effective());
  record.details()["min_eigenvalue"] = min_eigenvalue(omega.matrix());

  write_atomic(o.out, matrix_csv(omega.matrix()));
  record.add_output(o.out);
  write_manifest(manifest_path_for_file(o.out), record);
}

void run_estimate(const Invocation& inv, EstimateOptions& o, ConfigBinder& binder) {
  binder.apply_config("omega estimate");
  if (o.data.empty()) throw UsageError("--data is required");
  if (o.out.empty()) throw UsageError("--out is required");

  RunRecord record("omega estimate", inv);
  record.set_config(binder.effective());
  record.add_input(o.data);
  if (!o.sigma_x.empty()) record.add_input(o.sigma_x);

  const Eigen::MatrixXd x = csv::read(o.data, o.header).data;
  if (x.rows() < 2 || x.cols() < 1) throw UsageError("'" + o.data + "' needs at least 2 rows and 1 column");
  const OmegaSpec spec = make_omega_spec(o.mode, o.sigma_x, "", o.center);
  const CorrelationMatrix omega = build_omega(x, spec);

  auto& details = record.details();
  details["n"] = x.rows();
  details["p"] = x.cols();
  details["omega_mode"] = omega_mode_name(spec);
  if (o.mode == "ledoit-wolf" || o.mode == "lw") {
    const LedoitWolfResult lw = ledoit_wolf(x, o.center);
    details["ledoit_wolf"] = {{"m_n", lw.m_n},           {"d_n2", lw.d_n2},
                              {"b_n2", lw.b_n2},         {"a_n2", lw.a_n2},
                              {"target_weight", lw.target_weight()}, {"degenerate", lw.degenerate}};
  }
  details["min_eigenvalue"] = min_eigenvalue(omega.matrix());

  write_atomic(o.out, matrix_csv(omega.matrix()));
  record.add_output(o.out);
  write_manifest(manifest_path_for_file(o.out), record);
}

}  // namespace

void add_omega_commands(CLI::App& root, Registry& registry) {
  CLI::App* omega = root.add_subcommand("omega", "Generate a structured correlation matrix or estimate Omega");
  omega->require_subcommand(1);

  {
    CLI::App* app = omega->add_subcommand("generate", "Write a correlation template (AR1, MA1, blocked, ...)");
    auto o = std::make_shared<GenerateOptions>();
    auto binder = std::make_shared<ConfigBinder>(app);
    binder->option("--kind", "kind", o->kind, "ar1|ma1|ma2|bar1|bma1|bma2|equicorrelation|identity");
    binder->option("--rho", "rho", o->rho, "Correlation parameter");
    binder->option("--dim", "dim", o->dim, "Matrix dimension");
    binder->option("--block", "block", o->block, "Block size for the blocked kinds")->check(CLI::PositiveNumber);
    binder->option("--ma-form", "ma_form", o->ma_form, "MA lag rule: process (always PD) or banded");
    binder->option("--strict-blocks", "strict_blocks", o->strict_blocks,
                   "Reject a dimension that is not a multiple of the block size");
    binder->option("--out", "out", o->out, "Output CSV");
    registry.push_back({app, [o, binder](const Invocation& inv) { run_generate(inv, *o, *binder); }});
  }
  {
    CLI::App* app = omega->add_subcommand("estimate", "Build Omega from a design matrix");
    auto o = std::make_shared<EstimateOptions>();
    auto binder = std::make_shared<ConfigBinder>(app);
    binder->option("--data", "data", o->data, "Design matrix CSV, n rows by p columns");
    binder->option("--header", "header", o->header, "First non-comment line is a header");
    binder->option("--mode", "mode", o->mode, "identity|sample|ledoit-wolf|known|direct");
    binder->option("--sigma-x", "sigma_x", o->sigma_x, "Known covariance CSV for the known and direct modes");
    binder->option("--center,!--no-center", "center", o->center, "Column-center before estimating (default on)");
    binder->option("--out", "out", o->out, "Output CSV");
    registry.push_back({app, [o, binder](const Invocation& inv) { run_estimate(inv, *o, *binder); }});
  }
}

}  // namespace dasp::cli
