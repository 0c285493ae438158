#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "dasp/corr_structures.hpp"
#include "dasp/dataset.hpp"
#include "dasp/rng.hpp"

namespace dasp {

enum class CoefScheme { FixedBlocks, RandomBlocksDiag, RandomBlocksAR1 };

struct ScenarioSpec {
  Eigen::Index n = 100;
  Eigen::Index p = 50;
  StructureSpec sigma_x_structure{StructureKind::BMA1, 0.95, 5, MaForm::Process};
  double r2_target = 0.8;
  CoefScheme coef_scheme = CoefScheme::FixedBlocks;
  double b_star = 3.0;
  double sparsity_prob = 0.75;
  /// Length of the leading and trailing coefficient blocks.
  Eigen::Index signal_block = 5;
  /// Variance of the Gaussian the true intercept is drawn from.
  double intercept_var = 3.0;
  double random_block_var = 9.0;
  double random_block_rho = 0.8;
  std::uint64_t seed = 0;
  /// Overrides the seed of the held-out test set only.
  std::optional<std::uint64_t> test_seed;
};

struct SimulatedScenario {
  RegressionDataset train;
  RegressionDataset test;
  /// Set when every true coefficient is zero; sigma is then 1 instead of
  /// the calibrated value.
  bool degenerate = false;
};

/// sigma^2 = b' Sigma_X b (1 - R^2) / R^2.
double calibrate_sigma2(const Eigen::VectorXd& b, const Eigen::MatrixXd& sigma_x, double r2);

Eigen::VectorXd make_coefficients(const ScenarioSpec& s, Rng& rng);

SimulatedScenario generate(const ScenarioSpec& scenario);

CoefScheme parse_coef_scheme(std::string_view name);
std::string to_string(CoefScheme scheme);

nlohmann::json to_json(const ScenarioSpec& s);
/// Missing fields keep their defaults; unknown fields are rejected.
ScenarioSpec scenario_from_json(const nlohmann::json& j);

}  // namespace dasp
