#pragma once

#include <vector>

#include <Eigen/Dense>

#include "dasp/cov_estimation.hpp"
#include "dasp/dataset.hpp"
#include "dasp/priors.hpp"
#include "dasp/sampler.hpp"

namespace dasp {

struct LooOptions {
  /// Refusing larger n keeps exact LOO from silently running for hours.
  Eigen::Index max_n = 200;
  /// Folds run in parallel; chains within a fold run serially.
  int jobs = 1;
};

struct LooResult {
  double elpd_loo = 0.0;
  /// NaN for failed folds.
  Eigen::VectorXd pointwise;
  std::vector<Eigen::Index> failed_folds;
  /// Set when any fold failed; elpd_loo then sums the remaining folds.
  bool flagged = false;
};

/// Exact leave-one-out: fold i refits on the other n - 1 rows, rebuilding
/// Omega from that training fold, and scores row i by its posterior
/// predictive log density. Fold i samples with seed derived from
/// (config.seed, i), so two models with the same config are paired.
LooResult loo_exact(const RegressionDataset& data, const PriorSpec& prior, const OmegaSpec& omega,
                    const McmcConfig& config, const LooOptions& options = {});

struct LooComparison {
  double delta_elpd = 0.0;  // a - b
  double se = 0.0;          // sqrt(n) * sd of pointwise differences
  Eigen::Index n_used = 0;
};

/// Pairwise comparison over folds that succeeded in both runs.
LooComparison compare(const LooResult& a, const LooResult& b);

std::uint64_t fold_seed(std::uint64_t seed, Eigen::Index fold);

}  // namespace dasp
