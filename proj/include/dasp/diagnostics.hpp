#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dasp/sampler.hpp"

namespace dasp {

/// Rank-normalized split-R-hat: the larger of the bulk and folded-tail
/// versions. `draws` is chains x iterations. nullopt when every draw is
/// identical; +inf when chains are constant at different values.
/// Throws InsufficientDraws for fewer than 2 chains or 4 draws per chain.
std::optional<double> rhat(const Eigen::MatrixXd& draws);

/// Bulk effective sample size with Geyer's initial monotone sequence,
/// computed on rank-normalized split chains. nullopt for constant input.
/// Needs at least 1 chain of at least 4 draws.
std::optional<double> ess(const Eigen::MatrixXd& draws);

/// Classic (not rank-normalized) split-R-hat, exposed for testing.
double split_rhat_raw(const Eigen::MatrixXd& draws);

/// Autocorrelation-based ESS on the raw values (no rank normalization).
double ess_raw(const Eigen::MatrixXd& draws);

struct ParameterDiagnostic {
  std::string name;
  std::optional<double> rhat;
  std::optional<double> ess_bulk;
};

struct Diagnostics {
  std::vector<ParameterDiagnostic> parameters;
  /// Replaces the divergence count of gradient samplers: a chain is stuck
  /// when sigma repeats the same value for a long run (MH rejecting) or
  /// its sigma acceptance rate falls below 5%.
  std::vector<bool> stuck_chains;
  double max_rhat() const;
  double min_ess() const;
};

Diagnostics diagnose(const PosteriorDraws& draws);

}  // namespace dasp
