#pragma once

#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace dasp {

/// Symmetric positive-definite matrix with an exactly unit diagonal.
///
/// Instances only come out of `validate`, `identity` or the structure
/// generators, so holding one means the invariants were checked.
class CorrelationMatrix {
 public:
  static CorrelationMatrix identity(Eigen::Index dim);

  /// Accepts `m` iff it is square, symmetric and unit-diagonal within `tol`
  /// and its smallest eigenvalue exceeds max(tol, 1e-10 * largest).
  /// The accepted matrix is re-symmetrized and its diagonal set to 1.
  static CorrelationMatrix validate(const Eigen::MatrixXd& m, double tol = 1e-10);

  Eigen::Index dim() const { return m_.rows(); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  bool is_identity() const;

 private:
  explicit CorrelationMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {}
  friend CorrelationMatrix assemble_checked(Eigen::MatrixXd m);

  Eigen::MatrixXd m_;
};

enum class StructureKind { AR1, MA1, MA2, BAR1, BMA1, BMA2, Equicorrelation, Identity };

/// How the MA kinds turn rho into lag correlations.
///   Banded:  lag-1 = rho (MA2: lag-2 = (1 - rho) rho), the literal template.
///            Indefinite for large rho; construction then fails.
///   Process: autocorrelation of the MA(q) process with coefficients
///            theta_1 = rho (MA2: theta_2 = (1 - rho) rho). PD for every rho.
enum class MaForm { Banded, Process };

enum class BlockPolicy { AllowPartial, Strict };

struct StructureSpec {
  StructureKind kind = StructureKind::AR1;
  double rho = 0.0;
  int block_size = 5;
  MaForm ma_form = MaForm::Banded;
  BlockPolicy block_policy = BlockPolicy::AllowPartial;
};

CorrelationMatrix make_structure(const StructureSpec& spec, Eigen::Index dim);
CorrelationMatrix make_blocked(const StructureSpec& spec, Eigen::Index dim);

/// Lag correlations (lag 0 first) of the unblocked base kind.
Eigen::VectorXd structure_lags(StructureKind base, double rho, MaForm form);

bool is_blocked(StructureKind kind);
StructureKind base_kind(StructureKind kind);

StructureKind parse_structure_kind(std::string_view name);
std::string to_string(StructureKind kind);
MaForm parse_ma_form(std::string_view name);
std::string to_string(MaForm form);

}  // namespace dasp
