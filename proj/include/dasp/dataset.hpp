#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace dasp {

/// Design, response and, for simulated data, the generating truth.
struct RegressionDataset {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  std::optional<Eigen::VectorXd> b_true;
  std::optional<double> intercept_true;
  std::optional<double> sigma_true;
  std::optional<Eigen::MatrixXd> sigma_x_true;

  Eigen::Index n() const { return x.rows(); }
  Eigen::Index p() const { return x.cols(); }
};

/// Rows listed in `rows`, truth carried over.
RegressionDataset subset_rows(const RegressionDataset& data, const std::vector<Eigen::Index>& rows);

}  // namespace dasp
