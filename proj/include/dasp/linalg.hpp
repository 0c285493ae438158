#pragma once

#include <Eigen/Dense>

#include "dasp/error.hpp"

namespace dasp::linalg {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Eigenvalues of a symmetric matrix, ascending.
VectorXd symmetric_eigenvalues(const MatrixXd& m);

/// (m + m') / 2
MatrixXd symmetrize(const MatrixXd& m);

/// Largest absolute eigenvalue of a symmetric matrix.
double spectral_norm_symmetric(const MatrixXd& m);

/// Cholesky factorization that reports failure through `Error(kind)`.
/// When `min_pivot_ratio` > 0, the factorization is also rejected if
/// min(L_ii)^2 / max(L_ii)^2 falls below it (numerically singular input).
Eigen::LLT<MatrixXd> cholesky(const MatrixXd& m, ErrorKind kind, const char* context,
                              double min_pivot_ratio = 0.0);

MatrixXd spd_inverse(const MatrixXd& m, ErrorKind kind, const char* context,
                     double min_pivot_ratio = 0.0);

/// log|m| from a successful Cholesky factor.
double log_det(const Eigen::LLT<MatrixXd>& llt);

}  // namespace dasp::linalg
