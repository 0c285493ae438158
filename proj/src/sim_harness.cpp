#include "dasp/sim_harness.hpp"

#include <cmath>

#include "dasp/error.hpp"
#include "dasp/linalg.hpp"
#include "dasp/rng.hpp"

namespace dasp {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Independent streams per scenario seed.
constexpr std::uint64_t kStreamCoef = 0;
constexpr std::uint64_t kStreamTrain = 1;
constexpr std::uint64_t kStreamTest = 2;

void check(const ScenarioSpec& s) {
  if (s.n < 2 || s.p < 1) throw Error(ErrorKind::InvalidParameter, "scenario needs n >= 2 and p >= 1");
  if (!(s.r2_target > 0.0 && s.r2_target < 1.0)) throw Error(ErrorKind::InvalidParameter, "r2_target must be in (0, 1)");
  if (!(s.sparsity_prob >= 0.0 && s.sparsity_prob <= 1.0)) {
    throw Error(ErrorKind::InvalidParameter, "sparsity_prob must be in [0, 1]");
  }
  if (s.signal_block < 1) throw Error(ErrorKind::InvalidParameter, "signal_block must be positive");
  if (!(s.intercept_var >= 0.0) || !(s.random_block_var > 0.0) || !(std::abs(s.random_block_rho) < 1.0)) {
    throw Error(ErrorKind::InvalidParameter, "bad intercept or random-block parameters");
  }
}

MatrixXd structure_matrix(const StructureSpec& spec, Index p) {
  return (is_blocked(spec.kind) ? make_blocked(spec, p) : make_structure(spec, p)).matrix();
}

MatrixXd draw_design(const MatrixXd& chol_l, Index n, Rng& rng) {
  MatrixXd z(n, chol_l.rows());
  for (Index i = 0; i < n; ++i) z.row(i) = rng.normal_vector(chol_l.rows()).transpose();
  return z * chol_l.transpose();
}

RegressionDataset draw_dataset(const MatrixXd& chol_l, const VectorXd& b, double alpha, double sigma, Index n,
                               Rng& rng) {
  RegressionDataset d;
  d.x = draw_design(chol_l, n, rng);
  d.y = (d.x * b).array() + alpha;
  for (Index i = 0; i < n; ++i) d.y(i) += sigma * rng.normal();
  return d;
}

}  // namespace

double calibrate_sigma2(const VectorXd& b, const MatrixXd& sigma_x, double r2) {
  return b.dot(sigma_x * b) * (1.0 - r2) / r2;
}

VectorXd make_coefficients(const ScenarioSpec& s, Rng& rng) {
  const Index p = s.p;
  const Index k = std::min(s.signal_block, p);
  VectorXd b = VectorXd::Zero(p);
  if (s.coef_scheme == CoefScheme::FixedBlocks) {
    b.head(k).setConstant(s.b_star);
    b.tail(k).setConstant(s.b_star);
    return b;
  }
  StructureSpec block_spec{StructureKind::AR1, s.coef_scheme == CoefScheme::RandomBlocksAR1 ? s.random_block_rho : 0.0};
  const MatrixXd cov = s.random_block_var * make_structure(block_spec, k).matrix();
  const MatrixXd l = linalg::cholesky(cov, ErrorKind::NonPositiveDefinite, "coefficient block").matrixL();
  const VectorXd first = l * rng.normal_vector(k);
  const VectorXd last = l * rng.normal_vector(k);
  b.head(k) = first;
  b.tail(k) = last;
  // Zeroing only touches the block entries; the rest are already zero.
  std::vector<Index> block_idx;
  for (Index j = 0; j < k; ++j) block_idx.push_back(j);
  for (Index j = p - k; j < p; ++j) {
    if (j >= k) block_idx.push_back(j);
  }
  for (Index j : block_idx) {
    if (rng.uniform() < s.sparsity_prob) b(j) = 0.0;
  }
  return b;
}

SimulatedScenario generate(const ScenarioSpec& s) {
  check(s);
  const MatrixXd sigma_x = structure_matrix(s.sigma_x_structure, s.p);
  const MatrixXd chol_l = linalg::cholesky(sigma_x, ErrorKind::NonPositiveDefinite, "Sigma_X").matrixL();

  Rng coef_rng(s.seed, kStreamCoef);
  const VectorXd b = make_coefficients(s, coef_rng);
  const double alpha = std::sqrt(s.intercept_var) * coef_rng.normal();

  SimulatedScenario out;
  double sigma2 = calibrate_sigma2(b, sigma_x, s.r2_target);
  if (!(sigma2 > 0.0)) {
    out.degenerate = true;
    sigma2 = 1.0;
  }
  const double sigma = std::sqrt(sigma2);

  Rng train_rng(s.seed, kStreamTrain);
  Rng test_rng(s.test_seed.value_or(s.seed), kStreamTest);
  out.train = draw_dataset(chol_l, b, alpha, sigma, s.n, train_rng);
  out.test = draw_dataset(chol_l, b, alpha, sigma, s.n, test_rng);
  for (RegressionDataset* d : {&out.train, &out.test}) {
    d->b_true = b;
    d->intercept_true = alpha;
    d->sigma_true = sigma;
    d->sigma_x_true = sigma_x;
  }
  return out;
}

CoefScheme parse_coef_scheme(std::string_view name) {
  if (name == "fixed-blocks" || name == "fixed") return CoefScheme::FixedBlocks;
  if (name == "random-blocks-diag" || name == "random-diag") return CoefScheme::RandomBlocksDiag;
  if (name == "random-blocks-ar1" || name == "random-ar1") return CoefScheme::RandomBlocksAR1;
  throw Error(ErrorKind::InvalidParameter, "unknown coefficient scheme '" + std::string(name) + "'");
}

std::string to_string(CoefScheme scheme) {
  switch (scheme) {
    case CoefScheme::FixedBlocks: return "fixed-blocks";
    case CoefScheme::RandomBlocksDiag: return "random-blocks-diag";
    case CoefScheme::RandomBlocksAR1: return "random-blocks-ar1";
  }
  return "unknown";
}

nlohmann::json to_json(const ScenarioSpec& s) {
  nlohmann::json j = {{"n", s.n},
                      {"p", s.p},
                      {"structure", to_string(s.sigma_x_structure.kind)},
                      {"rho", s.sigma_x_structure.rho},
                      {"block_size", s.sigma_x_structure.block_size},
                      {"ma_form", to_string(s.sigma_x_structure.ma_form)},
                      {"r2_target", s.r2_target},
                      {"coef_scheme", to_string(s.coef_scheme)},
                      {"b_star", s.b_star},
                      {"sparsity_prob", s.sparsity_prob},
                      {"signal_block", s.signal_block},
                      {"intercept_var", s.intercept_var},
                      {"random_block_var", s.random_block_var},
                      {"random_block_rho", s.random_block_rho},
                      {"seed", s.seed}};
  if (s.test_seed) j["test_seed"] = *s.test_seed;
  return j;
}

ScenarioSpec scenario_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidParameter, "scenario must be a JSON object");
  ScenarioSpec s;
  for (const auto& [key, v] : j.items()) {
    if (key == "n") {
      s.n = v.get<Index>();
    } else if (key == "p") {
      s.p = v.get<Index>();
    } else if (key == "structure") {
      s.sigma_x_structure.kind = parse_structure_kind(v.get<std::string>());
    } else if (key == "rho") {
      s.sigma_x_structure.rho = v.get<double>();
    } else if (key == "block_size") {
      s.sigma_x_structure.block_size = v.get<int>();
    } else if (key == "ma_form") {
      s.sigma_x_structure.ma_form = parse_ma_form(v.get<std::string>());
    } else if (key == "r2_target") {
      s.r2_target = v.get<double>();
    } else if (key == "coef_scheme") {
      s.coef_scheme = parse_coef_scheme(v.get<std::string>());
    } else if (key == "b_star") {
      s.b_star = v.get<double>();
    } else if (key == "sparsity_prob") {
      s.sparsity_prob = v.get<double>();
    } else if (key == "signal_block") {
      s.signal_block = v.get<Index>();
    } else if (key == "intercept_var") {
      s.intercept_var = v.get<double>();
    } else if (key == "random_block_var") {
      s.random_block_var = v.get<double>();
    } else if (key == "random_block_rho") {
      s.random_block_rho = v.get<double>();
    } else if (key == "seed") {
      s.seed = v.get<std::uint64_t>();
    } else if (key == "test_seed") {
      s.test_seed = v.get<std::uint64_t>();
    } else {
      throw Error(ErrorKind::InvalidParameter, "unknown scenario field '" + key + "'");
    }
  }
  check(s);
  return s;
}

}  // namespace dasp
