#include "dasp/cov_estimation.hpp"

#include <cmath>

#include "dasp/error.hpp"
#include "dasp/linalg.hpp"

namespace dasp {

namespace {

Eigen::MatrixXd centered(const Eigen::MatrixXd& x, bool center) {
  if (!center) return x;
  return x.rowwise() - x.colwise().mean();
}

// Pivot ratio below which a covariance estimate is treated as singular.
constexpr double kSingularPivotRatio = 1e-13;

}  // namespace

std::string omega_mode_name(const OmegaSpec& spec) {
  struct Visitor {
    std::string operator()(const IdentityOmega&) const { return "identity"; }
    std::string operator()(const KnownCovariance&) const { return "known"; }
    std::string operator()(const DirectCovariance&) const { return "direct"; }
    std::string operator()(const SampleCovOmega&) const { return "sample"; }
    std::string operator()(const LedoitWolfOmega&) const { return "ledoit-wolf"; }
    std::string operator()(const UserOmega&) const { return "user"; }
  };
  return std::visit(Visitor{}, spec.mode);
}

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& x, bool center) {
  if (x.rows() < 2) throw Error(ErrorKind::InvalidParameter, "sample_covariance: need n >= 2");
  const Eigen::MatrixXd xc = centered(x, center);
  Eigen::MatrixXd s = (xc.transpose() * xc) / double(x.rows() - 1);
  return linalg::symmetrize(s);
}

LedoitWolfResult ledoit_wolf(const Eigen::MatrixXd& x, bool center) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (n < 2) throw Error(ErrorKind::InvalidParameter, "ledoit_wolf: need n >= 2");
  if (p < 1) throw Error(ErrorKind::InvalidParameter, "ledoit_wolf: need p >= 1");

  const Eigen::MatrixXd xc = centered(x, center);
  LedoitWolfResult r;
  r.sample_cov = linalg::symmetrize((xc.transpose() * xc) / double(n - 1));
  const Eigen::MatrixXd& s = r.sample_cov;
  const double pd = double(p);

  r.m_n = s.trace() / pd;
  Eigen::MatrixXd spread = s;
  spread.diagonal().array() -= r.m_n;
  r.d_n2 = spread.squaredNorm() / pd;

  // sum_k ||x_k x_k' - S||^2 = sum_k (|x_k|^4 - 2 x_k' S x_k) + n ||S||^2
  const Eigen::VectorXd row_sq = xc.rowwise().squaredNorm();
  const Eigen::VectorXd quad = ((xc * s).array() * xc.array()).rowwise().sum();
  const double total = (row_sq.array().square() - 2.0 * quad.array()).sum() + double(n) * s.squaredNorm();
  const double b_bar2 = std::max(0.0, total) / (double(n) * double(n) * pd);

  r.b_n2 = std::min(b_bar2, r.d_n2);
  r.a_n2 = r.d_n2 - r.b_n2;

  if (r.d_n2 <= 1e-12 * r.m_n * r.m_n) {
    r.degenerate = true;
    r.s_star = r.m_n * Eigen::MatrixXd::Identity(p, p);
    return r;
  }
  r.s_star = (r.a_n2 / r.d_n2) * s;
  r.s_star.diagonal().array() += (r.b_n2 / r.d_n2) * r.m_n;
  return r;
}

CorrelationMatrix cor_standardize(const Eigen::MatrixXd& theta) {
  if (theta.rows() != theta.cols() || theta.rows() == 0) {
    throw Error(ErrorKind::InvalidParameter, "cor_standardize: matrix must be square");
  }
  const Eigen::VectorXd d = theta.diagonal();
  if (!(d.array() > 0.0).all() || !d.allFinite()) {
    throw Error(ErrorKind::NonPositiveDiagonal, "cor_standardize: diagonal must be positive");
  }
  const Eigen::VectorXd inv_sqrt = d.array().sqrt().inverse();
  Eigen::MatrixXd omega = inv_sqrt.asDiagonal() * linalg::symmetrize(theta) * inv_sqrt.asDiagonal();
  omega.diagonal().setOnes();
  return CorrelationMatrix::validate(omega, 1e-8);
}

CorrelationMatrix build_omega(const Eigen::MatrixXd& x, const OmegaSpec& spec) {
  const Eigen::Index p = x.cols();
  struct Visitor {
    const Eigen::MatrixXd& x;
    Eigen::Index p;
    bool center;

    CorrelationMatrix operator()(const IdentityOmega&) const {
      return CorrelationMatrix::identity(p);
    }
    void check_sigma_x(const Eigen::MatrixXd& sigma_x) const {
      if (sigma_x.rows() != p || sigma_x.cols() != p) {
        throw Error(ErrorKind::InvalidParameter, "build_omega: Sigma_X must be p x p");
      }
      if ((sigma_x - sigma_x.transpose()).cwiseAbs().maxCoeff() >
          1e-10 * sigma_x.cwiseAbs().maxCoeff()) {
        throw Error(ErrorKind::NonSymmetric, "build_omega: Sigma_X is not symmetric");
      }
    }
    CorrelationMatrix operator()(const DirectCovariance& direct) const {
      check_sigma_x(direct.sigma_x);
      return cor_standardize(direct.sigma_x);
    }
    CorrelationMatrix operator()(const KnownCovariance& known) const {
      check_sigma_x(known.sigma_x);
      return cor_standardize(linalg::spd_inverse(known.sigma_x, ErrorKind::SingularCovariance,
                                                 "build_omega(known)", kSingularPivotRatio));
    }
    CorrelationMatrix operator()(const SampleCovOmega&) const {
      if (x.rows() <= p) {
        throw Error(ErrorKind::SingularCovariance,
                    "build_omega(sample): need n > p, got n=" + std::to_string(x.rows()) +
                        " p=" + std::to_string(p));
      }
      return cor_standardize(linalg::spd_inverse(sample_covariance(x, center),
                                                 ErrorKind::SingularCovariance,
                                                 "build_omega(sample)", kSingularPivotRatio));
    }
    CorrelationMatrix operator()(const LedoitWolfOmega&) const {
      const LedoitWolfResult lw = ledoit_wolf(x, center);
      return cor_standardize(linalg::spd_inverse(lw.s_star, ErrorKind::SingularCovariance,
                                                 "build_omega(ledoit-wolf)", kSingularPivotRatio));
    }
    CorrelationMatrix operator()(const UserOmega& user) const {
      if (user.omega.dim() != p) {
        throw Error(ErrorKind::InvalidParameter, "build_omega: user matrix must be p x p");
      }
      return user.omega;
    }
  };
  return std::visit(Visitor{x, p, spec.center}, spec.mode);
}

}  // namespace dasp
