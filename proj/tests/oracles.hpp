#pragma once

// Independent reference implementations used as test oracles. Each one
// takes a different numerical route from the library code it checks
// (explicit inverses, LU determinants, loops, regressions) so that a shared
// bug cannot make both sides agree.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// tr(Omega^-1) + ln|Omega| - p with an LU inverse and LU determinant.
inline double kl_prior(const Eigen::MatrixXd& omega) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(omega);
  const Eigen::MatrixXd inv = lu.inverse();
  return inv.trace() + std::log(lu.determinant()) - double(omega.rows());
}

/// Closed form for the 2x2 equicorrelation matrix.
inline double kl_prior_2x2(double rho) {
  const double det = 1.0 - rho * rho;
  return 2.0 / det + std::log(det) - 2.0;
}

struct Moments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

/// Posterior of b in y ~ N(X b, sigma^2 I), b ~ N(0, V) with
/// V = sigma^2 tau^2 D Omega D, built in covariance form with explicit
/// inverses: Cov = (X'X / sigma^2 + V^-1)^-1, mean = Cov X'y / sigma^2.
inline Moments conjugate_posterior(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& lambda,
                                   double tau, double sigma, const Eigen::MatrixXd& omega) {
  const Eigen::Index p = x.cols();
  Eigen::MatrixXd v(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) v(i, j) = sigma * sigma * tau * tau * lambda(i) * lambda(j) * omega(i, j);
  }
  const Eigen::MatrixXd v_inv = v.fullPivLu().inverse();
  const Eigen::MatrixXd prec = x.transpose() * x / (sigma * sigma) + v_inv;
  Moments m;
  m.covariance = prec.fullPivLu().inverse();
  m.covariance = 0.5 * (m.covariance + m.covariance.transpose()).eval();
  m.mean = m.covariance * x.transpose() * y / (sigma * sigma);
  return m;
}

/// The 2x2 normal-means posterior mean written out by hand (X = I, tau = 1,
/// sigma = 1, so b_hat = y). The cross term carries (1 - rho^2); see the
/// decisions ledger for the misprinted (1 - rho) variant.
inline Eigen::Vector2d two_by_two_mean(double l1, double l2, double rho, double y1, double y2) {
  const double a = l1 * l1;
  const double b = l2 * l2;
  const double denom = 1.0 + a + b + a * b * (1.0 - rho * rho);
  return Eigen::Vector2d((a * (1.0 + b * (1.0 - rho * rho)) * y1 + rho * l1 * l2 * y2) / denom,
                         (b * (1.0 + a * (1.0 - rho * rho)) * y2 + rho * l1 * l2 * y1) / denom);
}

/// Partial correlation of variables i and j given all others, from the
/// residual covariance of regressing (i, j) on the rest. No full inverse.
inline double partial_correlation(const Eigen::MatrixXd& sigma, Eigen::Index i, Eigen::Index j) {
  const Eigen::Index p = sigma.rows();
  std::vector<Eigen::Index> rest;
  for (Eigen::Index k = 0; k < p; ++k) {
    if (k != i && k != j) rest.push_back(k);
  }
  const Eigen::Index r = Eigen::Index(rest.size());
  Eigen::Matrix2d s_aa;
  s_aa << sigma(i, i), sigma(i, j), sigma(j, i), sigma(j, j);
  if (r == 0) return s_aa(0, 1) / std::sqrt(s_aa(0, 0) * s_aa(1, 1));
  Eigen::MatrixXd s_ar(2, r), s_rr(r, r);
  for (Eigen::Index a = 0; a < r; ++a) {
    s_ar(0, a) = sigma(i, rest[std::size_t(a)]);
    s_ar(1, a) = sigma(j, rest[std::size_t(a)]);
    for (Eigen::Index b = 0; b < r; ++b) s_rr(a, b) = sigma(rest[std::size_t(a)], rest[std::size_t(b)]);
  }
  const Eigen::Matrix2d resid = s_aa - s_ar * s_rr.colPivHouseholderQr().solve(s_ar.transpose());
  return resid(0, 1) / std::sqrt(resid(0, 0) * resid(1, 1));
}

struct LedoitWolf {
  double m = 0.0;
  double d2 = 0.0;
  double b2 = 0.0;
  double a2 = 0.0;
  Eigen::MatrixXd s;
  Eigen::MatrixXd s_star;
};

/// Ledoit-Wolf with every quantity accumulated in explicit loops over
/// observations and matrix entries. S = X'X / (n - 1) on centered X,
/// ||A||^2 = tr(A'A) / p, b_bar^2 = (1/n^2) sum_k ||x_k x_k' - S||^2.
inline LedoitWolf ledoit_wolf(const Eigen::MatrixXd& x_raw) {
  const Eigen::Index n = x_raw.rows();
  const Eigen::Index p = x_raw.cols();
  Eigen::MatrixXd x = x_raw;
  for (Eigen::Index j = 0; j < p; ++j) {
    double mu = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) mu += x(k, j);
    mu /= double(n);
    for (Eigen::Index k = 0; k < n; ++k) x(k, j) -= mu;
  }
  LedoitWolf r;
  r.s = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < p; ++i) {
      for (Eigen::Index j = 0; j < p; ++j) r.s(i, j) += x(k, i) * x(k, j);
    }
  }
  r.s /= double(n - 1);
  for (Eigen::Index i = 0; i < p; ++i) r.m += r.s(i, i);
  r.m /= double(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      const double e = r.s(i, j) - (i == j ? r.m : 0.0);
      r.d2 += e * e;
    }
  }
  r.d2 /= double(p);
  double b_bar = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) {
      for (Eigen::Index j = 0; j < p; ++j) {
        const double e = x(k, i) * x(k, j) - r.s(i, j);
        acc += e * e;
      }
    }
    b_bar += acc / double(p);
  }
  b_bar /= double(n) * double(n);
  r.b2 = std::min(b_bar, r.d2);
  r.a2 = r.d2 - r.b2;
  if (r.d2 <= 1e-12 * r.m * r.m) {
    r.s_star = r.m * Eigen::MatrixXd::Identity(p, p);  // S already proportional to I
    return r;
  }
  r.s_star = (r.a2 / r.d2) * r.s + (r.b2 / r.d2) * r.m * Eigen::MatrixXd::Identity(p, p);
  return r;
}

/// log N(y | mu, s^2) written out.
inline double normal_log_density(double y, double mu, double s) {
  const double z = (y - mu) / s;
  return -0.5 * z * z - std::log(s) - 0.5 * std::log(2.0 * std::numbers::pi);
}

}  // namespace oracle
