#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "dasp/cov_estimation.hpp"
#include "dasp/dataset.hpp"
#include "dasp/priors.hpp"

namespace dasp {

/// Scales held constant for the whole run; only b (and the intercept, if
/// fitted) are sampled. Used to check the conjugate block in isolation.
struct FixedScales {
  Eigen::VectorXd lambda;
  double tau = 1.0;
  double sigma = 1.0;
};

struct McmcConfig {
  int chains = 4;
  int warmup = 1000;
  int draws = 1000;
  std::uint64_t seed = 0;
  int thin = 1;
  int jobs = 1;
  bool fit_intercept = true;
  std::optional<FixedScales> fixed_scales;
};

/// Local scales are clamped to this range before forming D.
inline constexpr double kLambdaFloor = 1e-8;
inline constexpr double kLambdaCeil = 1e8;

struct ChainDraws {
  Eigen::MatrixXd b;        // draws x p
  Eigen::MatrixXd lambda;   // draws x p, assembled and clamped
  Eigen::VectorXd tau;
  Eigen::VectorXd sigma;
  Eigen::VectorXd intercept;
  Eigen::MatrixXd log_lik;  // draws x n
  long clamp_hits = 0;      // iterations where the lambda clamp was active
  double sigma_accept = 0.0;
  double sigma_step = 0.0;
};

struct PosteriorDraws {
  std::vector<ChainDraws> chains;
  nlohmann::json manifest;

  int n_chains() const { return int(chains.size()); }
  Eigen::Index n_draws() const { return chains.empty() ? 0 : chains.front().b.rows(); }
  Eigen::Index p() const { return chains.empty() ? 0 : chains.front().b.cols(); }
  Eigen::Index total_draws() const { return n_draws() * n_chains(); }

  /// Chains stacked vertically: total_draws x p.
  Eigen::MatrixXd stacked_b() const;
  Eigen::VectorXd stacked_intercept() const;
  Eigen::VectorXd stacked_sigma() const;
  Eigen::MatrixXd stacked_log_lik() const;
  /// chains x draws matrix of coefficient j.
  Eigen::MatrixXd b_by_chain(Eigen::Index j) const;
  Eigen::MatrixXd sigma_by_chain() const;
  Eigen::MatrixXd tau_by_chain() const;
};

/// Blocked Gibbs sampler. Each iteration draws b | rest from its Gaussian
/// conditional, the intercept under a flat prior, sigma by random-walk MH
/// on log sigma, then every scale latent by slice sampling on the log scale.
/// Omega is built once from the full design and held fixed.
PosteriorDraws fit(const RegressionDataset& data, const PriorSpec& prior, const OmegaSpec& omega,
                   const McmcConfig& config);

/// As `fit` with an already built Omega.
PosteriorDraws fit_with_omega(const RegressionDataset& data, const PriorSpec& prior,
                              const CorrelationMatrix& omega, const McmcConfig& config);

nlohmann::json to_json(const McmcConfig& config);

}  // namespace dasp
