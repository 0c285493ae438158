#pragma once

#include <string>
#include <variant>

#include <Eigen/Dense>

#include "dasp/corr_structures.hpp"

namespace dasp {

struct IdentityOmega {};
struct KnownCovariance {
  Eigen::MatrixXd sigma_x;
};
/// Omega = Cor(Sigma_X) with no inversion. Not the default construction:
/// its off-diagonals carry the sign of the marginal correlations instead of
/// minus the partial correlations. Kept for comparison runs.
struct DirectCovariance {
  Eigen::MatrixXd sigma_x;
};
struct SampleCovOmega {};
struct LedoitWolfOmega {};
struct UserOmega {
  CorrelationMatrix omega;
};

/// Where the prior correlation matrix comes from.
struct OmegaSpec {
  std::variant<IdentityOmega, KnownCovariance, DirectCovariance, SampleCovOmega, LedoitWolfOmega,
               UserOmega>
      mode = IdentityOmega{};
  /// Column-center X before estimating its covariance. Turn off only for
  /// designs known to be zero-mean.
  bool center = true;
};

std::string omega_mode_name(const OmegaSpec& spec);

/// Linear shrinkage estimate S* = w m_n I + (1 - w) S, w = b_n^2 / d_n^2.
/// Norms are the scaled Frobenius norm ||A||^2 = tr(A'A) / p.
struct LedoitWolfResult {
  double m_n = 0.0;
  double d_n2 = 0.0;
  double b_n2 = 0.0;
  double a_n2 = 0.0;
  Eigen::MatrixXd s_star;
  Eigen::MatrixXd sample_cov;
  /// Set when d_n^2 <= 1e-12 m_n^2; s_star is then m_n I.
  bool degenerate = false;

  /// Weight on the scaled-identity target.
  double target_weight() const { return degenerate ? 1.0 : b_n2 / d_n2; }
};

/// X'X / (n - 1), after column-centering when `center` is set.
Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& x, bool center = true);

LedoitWolfResult ledoit_wolf(const Eigen::MatrixXd& x, bool center = true);

/// Omega_ij = Theta_ij / sqrt(Theta_ii Theta_jj).
CorrelationMatrix cor_standardize(const Eigen::MatrixXd& theta);

/// Identity -> I; Known -> Cor(Sigma_X^-1); Direct -> Cor(Sigma_X); SampleCov -> Cor(S^-1);
/// LedoitWolf -> Cor((S*)^-1); UserMatrix -> pass-through.
CorrelationMatrix build_omega(const Eigen::MatrixXd& x, const OmegaSpec& spec);

}  // namespace dasp
