#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "dasp/corr_structures.hpp"
#include "dasp/dataset.hpp"
#include "dasp/sampler.hpp"

namespace dasp {

/// Per-test-point log of the posterior-averaged predictive density.
Eigen::VectorXd elpd_pointwise(const PosteriorDraws& draws, const RegressionDataset& test);

/// Sum over test points of ln((1/S) sum_s N(y_i | a_s + x_i' b_s, sigma_s^2)).
double elpd(const PosteriorDraws& draws, const RegressionDataset& test);

/// Empty subsets (no zero or no nonzero truths) give nullopt.
struct RmseSplit {
  double all = 0.0;
  std::optional<double> zero;
  std::optional<double> nonzero;
};

/// Mean over coefficients of the root posterior mean squared error.
RmseSplit rmse_split(const Eigen::MatrixXd& b_draws, const Eigen::VectorXd& b_true);
RmseSplit rmse_split(const PosteriorDraws& draws, const Eigen::VectorXd& b_true);

struct CoverageRecord {
  double level = 0.95;
  double coverage = 0.0;
  double avg_width = 0.0;
  std::optional<double> sensitivity;  // selected among true nonzeros
  std::optional<double> specificity;  // not selected among true zeros
  std::optional<double> coverage_zero;
  std::optional<double> coverage_nonzero;
};

/// Type-7 sample quantile of a column.
double quantile(std::vector<double> values, double prob);

/// Equal-tailed intervals; a coefficient is selected when its interval excludes 0.
CoverageRecord coverage_metrics(const Eigen::MatrixXd& b_draws, const Eigen::VectorXd& b_true, double level = 0.95);
CoverageRecord coverage_metrics(const PosteriorDraws& draws, const Eigen::VectorXd& b_true, double level = 0.95);

struct RocPoint {
  double level = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

/// (1 - specificity, sensitivity) over interval levels, sorted by fpr then tpr.
/// Needs both zero and nonzero truths.
std::vector<RocPoint> roc_curve(const Eigen::MatrixXd& b_draws, const Eigen::VectorXd& b_true,
                                const std::vector<double>& levels);

std::vector<double> default_roc_levels();

/// Q(M_Omega) - Q(M).
double delta(double metric_with_omega, double metric_without);

/// Throws PairingMismatch unless two run manifests share the data id,
/// prior kind and sampler settings; only the Omega fields may differ.
void check_pairing(const nlohmann::json& with_omega, const nlohmann::json& without);

/// delta() after check_pairing().
double paired_delta(const nlohmann::json& with_manifest, double metric_with, const nlohmann::json& without_manifest,
                    double metric_without);

/// Posterior mean of m_eff = tr(I - kappa) on the training design, over at
/// most `max_draws` evenly spaced draws.
double meff_posterior_mean(const PosteriorDraws& draws, const Eigen::MatrixXd& x, const CorrelationMatrix& omega,
                           Eigen::Index max_draws = 400);

/// m_eff for one (lambda, tau): sum mu / (1 + mu), mu = eig(G' X'X G), G = tau D L.
/// Valid for p > n.
double effective_parameters_general(const Eigen::MatrixXd& xtx, const Eigen::VectorXd& lambda, double tau,
                                    const Eigen::MatrixXd& omega_chol_l);

struct MetricsReport {
  double elpd = 0.0;
  RmseSplit rmse;
  CoverageRecord coverage;
  double meff_posterior_mean = 0.0;
};

MetricsReport compute_metrics(const PosteriorDraws& draws, const RegressionDataset& train,
                              const RegressionDataset& test, const CorrelationMatrix& omega);

}  // namespace dasp
