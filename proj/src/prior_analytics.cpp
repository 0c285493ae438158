#include "dasp/prior_analytics.hpp"

#include <algorithm>
#include <cmath>

#include "dasp/error.hpp"
#include "dasp/linalg.hpp"
#include "dasp/parallel.hpp"

namespace dasp {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr long kChunk = 4096;

void check_state(const ScaleState& s, Index p) {
  if (s.lambda.size() != p) throw Error(ErrorKind::InvalidParameter, "lambda has wrong length");
  if (!(s.lambda.array() > 0.0).all() || !s.lambda.allFinite() || !(s.tau > 0.0) || !std::isfinite(s.tau) ||
      !(s.sigma > 0.0) || !std::isfinite(s.sigma)) {
    throw Error(ErrorKind::InvalidParameter, "scales must be positive and finite");
  }
}

void check_xy(const MatrixXd& x, const VectorXd& y, const CorrelationMatrix& omega) {
  if (x.rows() != y.size()) throw Error(ErrorKind::InvalidParameter, "X and y row counts differ");
  if (x.cols() != omega.dim()) throw Error(ErrorKind::InvalidParameter, "X and Omega dimensions differ");
}

MatrixXd omega_inverse(const CorrelationMatrix& omega) {
  if (omega.is_identity()) return MatrixXd::Identity(omega.dim(), omega.dim());
  return linalg::spd_inverse(omega.matrix(), ErrorKind::NumericalSingularity, "Omega inverse");
}

VectorXd solve_q(const MatrixXd& q, const VectorXd& rhs) {
  return linalg::cholesky(q, ErrorKind::NumericalSingularity, "Q factorization").solve(rhs);
}

MatrixXd prior_cov_v(const ScaleState& state, const CorrelationMatrix& omega) {
  const VectorXd s = state.tau * state.lambda;
  return s.asDiagonal() * omega.matrix() * s.asDiagonal();
}

MatrixXd xtx_inverse(const MatrixXd& x) {
  if (x.rows() < x.cols()) throw Error(ErrorKind::RankDeficient, "X'X is singular when n < p");
  const MatrixXd xtx = x.transpose() * x;
  return linalg::spd_inverse(xtx, ErrorKind::RankDeficient, "X'X inverse", 1e-14);
}

}  // namespace

MatrixXd prior_precision(const ScaleState& state, const MatrixXd& omega_inv) {
  const VectorXd inv_s = (state.tau * state.lambda).cwiseInverse();
  return inv_s.asDiagonal() * omega_inv * inv_s.asDiagonal();
}

ConditionalPosterior conditional_posterior(const MatrixXd& x, const VectorXd& y, const ScaleState& state,
                                           const CorrelationMatrix& omega) {
  check_xy(x, y, omega);
  check_state(state, x.cols());
  ConditionalPosterior out;
  out.q_matrix = linalg::symmetrize(x.transpose() * x + prior_precision(state, omega_inverse(omega)));
  const auto llt = linalg::cholesky(out.q_matrix, ErrorKind::NumericalSingularity, "Q factorization");
  out.mean = llt.solve(x.transpose() * y);
  const Index p = x.cols();
  out.covariance = linalg::symmetrize(state.sigma * state.sigma * llt.solve(MatrixXd::Identity(p, p)));
  return out;
}

VectorXd posterior_mean_via_mle(const MatrixXd& x, const VectorXd& y, const ScaleState& state,
                                const CorrelationMatrix& omega) {
  check_xy(x, y, omega);
  check_state(state, x.cols());
  const MatrixXd w = xtx_inverse(x);
  const VectorXd b_hat = w * (x.transpose() * y);
  const MatrixXd v = prior_cov_v(state, omega);
  const MatrixXd vw = linalg::symmetrize(v + w);
  const auto llt = linalg::cholesky(vw, ErrorKind::NumericalSingularity, "V + (X'X)^-1");
  return v * llt.solve(b_hat);
}

VectorXd mean_shift(const MatrixXd& x, const VectorXd& y, const ScaleState& state,
                    const CorrelationMatrix& omega) {
  check_xy(x, y, omega);
  check_state(state, x.cols());
  const MatrixXd xtx = x.transpose() * x;
  const VectorXd xty = x.transpose() * y;
  const Index p = x.cols();
  const MatrixXd q_omega = xtx + prior_precision(state, omega_inverse(omega));
  const MatrixXd q_id = xtx + prior_precision(state, MatrixXd::Identity(p, p));
  return solve_q(q_omega, xty) - solve_q(q_id, xty);
}

SpectralBoundReport spectral_bounds(const MatrixXd& x, const VectorXd& lambda, const CorrelationMatrix& omega) {
  if (x.cols() != omega.dim()) throw Error(ErrorKind::InvalidParameter, "X and Omega dimensions differ");
  ScaleState state{lambda, 1.0, 1.0};
  check_state(state, x.cols());
  const Index p = x.cols();
  const MatrixXd xtx = x.transpose() * x;
  const VectorXd nu = linalg::symmetric_eigenvalues(xtx);
  const VectorXd om = linalg::symmetric_eigenvalues(omega.matrix());

  SpectralBoundReport r;
  r.lambda_max = lambda.maxCoeff();
  r.lambda_min = lambda.minCoeff();
  r.nu_max = nu(p - 1);
  r.nu_min = std::max(nu(0), 0.0);
  r.omega_max = om(p - 1);
  r.omega_min = om(0);

  // ||Omega^-1 - I||_2 from the eigenvalues of Omega.
  double dev = 0.0;
  for (Index i = 0; i < p; ++i) dev = std::max(dev, std::abs(1.0 / om(i) - 1.0));
  if (omega.is_identity()) dev = 0.0;

  const double l1 = r.lambda_max * r.lambda_max;
  const double lp = r.lambda_min * r.lambda_min;
  r.lower = dev / (l1 * (r.nu_max + 1.0 / (lp * r.omega_min)) * (r.nu_max + 1.0 / lp));
  r.upper = dev / (lp * (r.nu_min + 1.0 / (l1 * r.omega_max)) * (r.nu_min + 1.0 / l1));

  // Both inverses go through the same code path so Omega = I gives exactly 0.
  const MatrixXd eye = MatrixXd::Identity(p, p);
  const MatrixXd q_omega = linalg::symmetrize(xtx + prior_precision(state, omega_inverse(omega)));
  const MatrixXd q_id = linalg::symmetrize(xtx + prior_precision(state, eye));
  const MatrixXd inv_omega = linalg::spd_inverse(q_omega, ErrorKind::NumericalSingularity, "Q_Omega");
  const MatrixXd inv_id = linalg::spd_inverse(q_id, ErrorKind::NumericalSingularity, "Q_I");
  r.actual = linalg::spectral_norm_symmetric(linalg::symmetrize(inv_omega - inv_id));
  return r;
}

double kl_gaussian(const VectorXd& mean_p, const MatrixXd& cov_p, const VectorXd& mean_q, const MatrixXd& cov_q) {
  const Index p = mean_p.size();
  if (cov_p.rows() != p || cov_p.cols() != p || mean_q.size() != p || cov_q.rows() != p || cov_q.cols() != p) {
    throw Error(ErrorKind::InvalidParameter, "kl_gaussian: dimension mismatch");
  }
  const auto llt_p = linalg::cholesky(cov_p, ErrorKind::NonPositiveDefinite, "cov_p");
  const auto llt_q = linalg::cholesky(cov_q, ErrorKind::NonPositiveDefinite, "cov_q");
  const VectorXd d = mean_q - mean_p;
  const double maha = d.dot(llt_q.solve(d));
  const double trace = llt_q.solve(cov_p).trace();
  const double kl = 0.5 * (maha + trace - (linalg::log_det(llt_p) - linalg::log_det(llt_q)) - double(p));
  return std::max(kl, 0.0);
}

double kl_prior(const CorrelationMatrix& omega) {
  if (omega.is_identity()) return 0.0;
  const auto llt = linalg::cholesky(omega.matrix(), ErrorKind::NonPositiveDefinite, "Omega");
  const Index p = omega.dim();
  const double trace_inv = llt.solve(MatrixXd::Identity(p, p)).trace();
  return std::max(trace_inv + linalg::log_det(llt) - double(p), 0.0);
}

MatrixXd shrinkage_matrix(const MatrixXd& x, const ScaleState& state, const CorrelationMatrix& omega) {
  if (x.cols() != omega.dim()) throw Error(ErrorKind::InvalidParameter, "X and Omega dimensions differ");
  check_state(state, x.cols());
  const Index p = x.cols();
  const MatrixXd w = xtx_inverse(x);
  const MatrixXd v = prior_cov_v(state, omega);
  const auto llt = linalg::cholesky(linalg::symmetrize(v + w), ErrorKind::NumericalSingularity, "V + (X'X)^-1");
  // (V + W)^-1 V, transposed, is V (V + W)^-1 since both are symmetric.
  const MatrixXd vvw = llt.solve(v).transpose();
  return MatrixXd::Identity(p, p) - vvw;
}

double effective_parameters(const MatrixXd& kappa) { return double(kappa.rows()) - kappa.trace(); }

double effective_parameters_identity_design(const VectorXd& lambda, double tau, const CorrelationMatrix& omega) {
  const VectorXd s2 = (tau * lambda).array().square().max(1e-300).min(1e300).matrix();
  if (omega.is_identity()) return (s2.array() / (1.0 + s2.array())).sum();
  MatrixXd m = omega.matrix();
  m.diagonal() += s2.cwiseInverse();
  const auto llt = linalg::cholesky(m, ErrorKind::NumericalSingularity, "Omega + S^-2");
  return llt.solve(omega.matrix()).trace();
}

int GridSpec::bin(double v) const {
  if (!(v >= lo && v < hi)) return -1;
  const int k = int((v - lo) / width());
  return std::min(k, bins - 1);
}

MatrixXd prior_draws(const PriorSpec& prior, const CorrelationMatrix& omega, long n_draws, std::uint64_t seed,
                     int jobs) {
  if (n_draws < 1) throw Error(ErrorKind::InvalidParameter, "n_draws must be positive");
  const Index p = omega.dim();
  const MatrixXd chol = omega.is_identity()
                            ? MatrixXd::Identity(p, p)
                            : MatrixXd(linalg::cholesky(omega.matrix(), ErrorKind::NonPositiveDefinite, "Omega")
                                           .matrixL());
  MatrixXd out(n_draws, p);
  const long n_chunks = (n_draws + kChunk - 1) / kChunk;
  parallel_for(n_chunks, jobs, [&](long c) {
    Rng rng(seed, std::uint64_t(c));
    const long end = std::min(n_draws, (c + 1) * kChunk);
    for (long r = c * kChunk; r < end; ++r) {
      const ScaleDraw sd = sample_scales(prior, p, rng);
      const VectorXd z = rng.normal_vector(p);
      out.row(r) = (sd.tau * sd.lambda.array() * (chol * z).array()).transpose();
    }
  });
  return out;
}

PriorGrid mc_prior_grid(const PriorSpec& prior, const CorrelationMatrix& omega, long n_draws, const GridSpec& grid,
                        std::uint64_t seed, int jobs) {
  if (omega.dim() != 2) throw Error(ErrorKind::InvalidParameter, "contour grids need a 2x2 Omega");
  if (grid.bins < 1 || !(grid.hi > grid.lo)) throw Error(ErrorKind::InvalidParameter, "bad grid");
  PriorGrid out;
  out.grid = grid;
  out.draws = prior_draws(prior, omega, n_draws, seed, jobs);
  out.counts = MatrixXd::Zero(grid.bins, grid.bins);
  for (Index r = 0; r < out.draws.rows(); ++r) {
    const int i = grid.bin(out.draws(r, 0));
    const int j = grid.bin(out.draws(r, 1));
    if (i < 0 || j < 0) {
      ++out.outside;
      continue;
    }
    out.counts(i, j) += 1.0;
  }
  return out;
}

ConditionalSlice conditional_slice(const PriorGrid& grid, double b2, double window_frac) {
  ConditionalSlice s;
  s.b2 = b2;
  s.half_window = window_frac * (grid.grid.hi - grid.grid.lo);
  s.counts = VectorXd::Zero(grid.grid.bins);
  for (Index r = 0; r < grid.draws.rows(); ++r) {
    if (std::abs(grid.draws(r, 1) - b2) > s.half_window) continue;
    ++s.n_in_window;
    const int i = grid.grid.bin(grid.draws(r, 0));
    if (i >= 0) s.counts(i) += 1.0;
  }
  if (s.n_in_window < 100) {
    throw Error(ErrorKind::InsufficientDraws,
                "conditional slice at b2 = " + std::to_string(b2) + " holds " + std::to_string(s.n_in_window) +
                    " draws (< 100)");
  }
  return s;
}

VectorXd mc_meff(const PriorSpec& prior, const CorrelationMatrix& omega, long n_draws, std::uint64_t seed, int jobs) {
  if (n_draws < 1) throw Error(ErrorKind::InvalidParameter, "n_draws must be positive");
  const Index p = omega.dim();
  VectorXd out(n_draws);
  const long n_chunks = (n_draws + kChunk - 1) / kChunk;
  parallel_for(n_chunks, jobs, [&](long c) {
    Rng rng(seed, std::uint64_t(c));
    const long end = std::min(n_draws, (c + 1) * kChunk);
    for (long r = c * kChunk; r < end; ++r) {
      const ScaleDraw sd = sample_scales(prior, p, rng);
      const VectorXd lam = sd.lambda.cwiseMax(1e-150).cwiseMin(1e150);
      out(r) = effective_parameters_identity_design(lam, sd.tau, omega);
    }
  });
  return out;
}

}  // namespace dasp
