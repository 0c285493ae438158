#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "dasp/corr_structures.hpp"
#include "dasp/priors.hpp"

namespace dasp {

/// Scales entering b | sigma, tau, lambda ~ N(0, sigma^2 tau^2 D Omega D).
struct ScaleState {
  Eigen::VectorXd lambda;
  double tau = 1.0;
  double sigma = 1.0;
};

struct ConditionalPosterior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;  // sigma^2 Q^-1
  Eigen::MatrixXd q_matrix;    // X'X + tau^-2 D^-1 Omega^-1 D^-1
};

/// Prior precision tau^-2 D^-1 Omega^-1 D^-1 (sigma excluded).
Eigen::MatrixXd prior_precision(const ScaleState& state, const Eigen::MatrixXd& omega_inv);

ConditionalPosterior conditional_posterior(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                           const ScaleState& state, const CorrelationMatrix& omega);

/// V (V + (X'X)^-1)^-1 b_hat with V = tau^2 D Omega D. Requires full column rank.
Eigen::VectorXd posterior_mean_via_mle(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                       const ScaleState& state, const CorrelationMatrix& omega);

/// (Q_Omega^-1 - Q_I^-1) X'y.
Eigen::VectorXd mean_shift(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const ScaleState& state,
                           const CorrelationMatrix& omega);

struct SpectralBoundReport {
  double lower = 0.0;
  double actual = 0.0;
  double upper = 0.0;
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  double nu_max = 0.0;
  double nu_min = 0.0;
  double omega_max = 0.0;
  double omega_min = 0.0;
};

/// Two-sided bounds on ||Q_Omega^-1 - Q_I^-1||_2 with tau = 1, alongside
/// the actual norm from an eigensolve of the difference.
SpectralBoundReport spectral_bounds(const Eigen::MatrixXd& x, const Eigen::VectorXd& lambda,
                                    const CorrelationMatrix& omega);

/// KL(P || Q) between two multivariate normals.
double kl_gaussian(const Eigen::VectorXd& mean_p, const Eigen::MatrixXd& cov_p, const Eigen::VectorXd& mean_q,
                   const Eigen::MatrixXd& cov_q);

/// tr(Omega^-1) + ln|Omega| - p. Note this is twice kl_gaussian between the
/// Omega = I and the Omega conditional priors.
double kl_prior(const CorrelationMatrix& omega);

/// kappa = I - V (V + (X'X)^-1)^-1, V = tau^2 D Omega D.
Eigen::MatrixXd shrinkage_matrix(const Eigen::MatrixXd& x, const ScaleState& state,
                                 const CorrelationMatrix& omega);

/// tr(I - kappa).
double effective_parameters(const Eigen::MatrixXd& kappa);

/// m_eff for the normal-means design X = I without forming kappa:
/// tr(Omega (Omega + S^-2)^-1) with S = diag(tau lambda). Stable for extreme scales.
double effective_parameters_identity_design(const Eigen::VectorXd& lambda, double tau,
                                            const CorrelationMatrix& omega);

struct GridSpec {
  int bins = 200;
  double lo = -6.0;
  double hi = 6.0;
  double width() const { return (hi - lo) / bins; }
  double center(int k) const { return lo + (k + 0.5) * width(); }
  /// Bin index or -1 outside [lo, hi).
  int bin(double v) const;
};

struct PriorGrid {
  GridSpec grid;
  /// counts(i, j): b1 in bin i, b2 in bin j.
  Eigen::MatrixXd counts;
  /// n_draws x p.
  Eigen::MatrixXd draws;
  long outside = 0;
};

/// Monte Carlo draws of b from the marginal prior (sigma = 1). Draws are
/// generated in fixed-size chunks with substreams (seed, chunk), so the
/// output does not depend on `jobs`.
Eigen::MatrixXd prior_draws(const PriorSpec& prior, const CorrelationMatrix& omega, long n_draws,
                            std::uint64_t seed, int jobs = 1);

/// Joint histogram of (b1, b2). Needs omega.dim() == 2.
PriorGrid mc_prior_grid(const PriorSpec& prior, const CorrelationMatrix& omega, long n_draws,
                        const GridSpec& grid, std::uint64_t seed, int jobs = 1);

struct ConditionalSlice {
  double b2 = 0.0;
  double half_window = 0.0;
  Eigen::VectorXd counts;  // over b1 bins
  long n_in_window = 0;
};

/// Histogram of b1 among draws with |b2 - value| <= window_frac * (hi - lo).
/// Throws InsufficientDraws when fewer than 100 draws fall in the window.
ConditionalSlice conditional_slice(const PriorGrid& grid, double b2, double window_frac = 0.02);

/// Prior draws of m_eff on the normal-means design X = I.
Eigen::VectorXd mc_meff(const PriorSpec& prior, const CorrelationMatrix& omega, long n_draws,
                        std::uint64_t seed, int jobs = 1);

}  // namespace dasp
