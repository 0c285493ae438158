#include "dasp/linalg.hpp"

#include <cmath>
#include <string>

namespace dasp::linalg {

VectorXd symmetric_eigenvalues(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

MatrixXd symmetrize(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

double spectral_norm_symmetric(const MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  return symmetric_eigenvalues(m).cwiseAbs().maxCoeff();
}

Eigen::LLT<MatrixXd> cholesky(const MatrixXd& m, ErrorKind kind, const char* context,
                              double min_pivot_ratio) {
  Eigen::LLT<MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw Error(kind, std::string(context) + ": Cholesky factorization failed");
  }
  const VectorXd diag = llt.matrixLLT().diagonal();
  if (!diag.allFinite() || diag.minCoeff() <= 0.0) {
    throw Error(kind, std::string(context) + ": non-positive Cholesky pivot");
  }
  if (min_pivot_ratio > 0.0) {
    const double ratio = std::pow(diag.minCoeff() / diag.maxCoeff(), 2);
    if (ratio < min_pivot_ratio) {
      throw Error(kind, std::string(context) + ": matrix is numerically singular (pivot ratio " +
                            std::to_string(ratio) + ")");
    }
  }
  return llt;
}

MatrixXd spd_inverse(const MatrixXd& m, ErrorKind kind, const char* context,
                     double min_pivot_ratio) {
  const auto llt = cholesky(m, kind, context, min_pivot_ratio);
  return symmetrize(llt.solve(MatrixXd::Identity(m.rows(), m.cols())));
}

double log_det(const Eigen::LLT<MatrixXd>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace dasp::linalg
