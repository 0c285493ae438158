#include "dasp/corr_structures.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "dasp/error.hpp"
#include "dasp/linalg.hpp"

namespace dasp {

namespace {

constexpr double kRelativePdFloor = 1e-10;

void require_positive_definite(const Eigen::MatrixXd& m, double abs_tol, const char* context) {
  const Eigen::VectorXd ev = linalg::symmetric_eigenvalues(m);
  const double smallest = ev[0];
  const double largest = ev[ev.size() - 1];
  const double threshold = std::max(abs_tol, kRelativePdFloor * std::abs(largest));
  if (!(smallest > threshold)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << context << ": smallest eigenvalue " << smallest << " <= " << threshold;
    throw Error(ErrorKind::NonPositiveDefinite, msg.str());
  }
}

Eigen::MatrixXd toeplitz(Eigen::Index dim, const Eigen::VectorXd& lags) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      const Eigen::Index lag = std::abs(i - j);
      if (lag < lags.size()) m(i, j) = lags[lag];
    }
  }
  return m;
}

Eigen::MatrixXd base_matrix(StructureKind base, double rho, MaForm form, Eigen::Index dim) {
  switch (base) {
    case StructureKind::Identity:
      return Eigen::MatrixXd::Identity(dim, dim);
    case StructureKind::Equicorrelation: {
      Eigen::MatrixXd m = Eigen::MatrixXd::Constant(dim, dim, rho);
      m.diagonal().setOnes();
      return m;
    }
    case StructureKind::AR1: {
      Eigen::VectorXd lags(dim);
      for (Eigen::Index k = 0; k < dim; ++k) lags[k] = k == 0 ? 1.0 : std::pow(rho, double(k));
      return toeplitz(dim, lags);
    }
    case StructureKind::MA1:
    case StructureKind::MA2:
      return toeplitz(dim, structure_lags(base, rho, form));
    default:
      throw Error(ErrorKind::InvalidParameter, "base_matrix: blocked kind has no base matrix");
  }
}

void check_rho(const StructureSpec& spec) {
  if (!std::isfinite(spec.rho) || std::abs(spec.rho) >= 1.0) {
    throw Error(ErrorKind::InvalidParameter, "rho must lie in (-1, 1)");
  }
  if (base_kind(spec.kind) == StructureKind::MA2) {
    const double rho1 = spec.rho;
    const double rho2 = (1.0 - spec.rho) * spec.rho;
    if (!(rho1 + rho2 < 1.0 && rho1 - rho2 < 1.0)) {
      throw Error(ErrorKind::InvalidParameter, "MA2 requires rho1 +/- rho2 < 1");
    }
  }
}

}  // namespace

CorrelationMatrix assemble_checked(Eigen::MatrixXd m) { return CorrelationMatrix(std::move(m)); }

CorrelationMatrix CorrelationMatrix::identity(Eigen::Index dim) {
  return CorrelationMatrix(Eigen::MatrixXd::Identity(dim, dim));
}

CorrelationMatrix CorrelationMatrix::validate(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::InvalidParameter, "validate: matrix must be square and non-empty");
  }
  if (!m.allFinite()) throw Error(ErrorKind::InvalidParameter, "validate: non-finite entries");
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol) {
    throw Error(ErrorKind::NonSymmetric, "validate: max |m - m'| = " + std::to_string(asym));
  }
  const double diag_dev = (m.diagonal().array() - 1.0).abs().maxCoeff();
  if (diag_dev > tol) {
    throw Error(ErrorKind::NonUnitDiagonal,
                "validate: max |m_ii - 1| = " + std::to_string(diag_dev));
  }
  Eigen::MatrixXd sym = linalg::symmetrize(m);
  sym.diagonal().setOnes();
  require_positive_definite(sym, tol, "validate");
  return CorrelationMatrix(std::move(sym));
}

bool CorrelationMatrix::is_identity() const {
  return (m_ - Eigen::MatrixXd::Identity(dim(), dim())).cwiseAbs().maxCoeff() == 0.0;
}

Eigen::VectorXd structure_lags(StructureKind base, double rho, MaForm form) {
  if (base == StructureKind::MA1) {
    const double r1 = form == MaForm::Banded ? rho : rho / (1.0 + rho * rho);
    return Eigen::Vector2d(1.0, r1);
  }
  if (base == StructureKind::MA2) {
    const double theta1 = rho;
    const double theta2 = (1.0 - rho) * rho;
    if (form == MaForm::Banded) return Eigen::Vector3d(1.0, theta1, theta2);
    const double gamma0 = 1.0 + theta1 * theta1 + theta2 * theta2;
    return Eigen::Vector3d(1.0, (theta1 + theta1 * theta2) / gamma0, theta2 / gamma0);
  }
  throw Error(ErrorKind::InvalidParameter, "structure_lags: only MA kinds have finite lags");
}

bool is_blocked(StructureKind kind) {
  return kind == StructureKind::BAR1 || kind == StructureKind::BMA1 || kind == StructureKind::BMA2;
}

StructureKind base_kind(StructureKind kind) {
  switch (kind) {
    case StructureKind::BAR1: return StructureKind::AR1;
    case StructureKind::BMA1: return StructureKind::MA1;
    case StructureKind::BMA2: return StructureKind::MA2;
    default: return kind;
  }
}

CorrelationMatrix make_structure(const StructureSpec& spec, Eigen::Index dim) {
  if (dim < 1) throw Error(ErrorKind::InvalidParameter, "make_structure: dim must be >= 1");
  if (is_blocked(spec.kind)) return make_blocked(spec, dim);
  if (spec.kind == StructureKind::Identity) return CorrelationMatrix::identity(dim);
  check_rho(spec);
  Eigen::MatrixXd m = base_matrix(spec.kind, spec.rho, spec.ma_form, dim);
  require_positive_definite(m, 0.0, ("make_structure(" + to_string(spec.kind) + ")").c_str());
  return assemble_checked(std::move(m));
}

CorrelationMatrix make_blocked(const StructureSpec& spec, Eigen::Index dim) {
  if (!is_blocked(spec.kind)) {
    throw Error(ErrorKind::InvalidParameter, "make_blocked: kind must be BAR1, BMA1 or BMA2");
  }
  if (dim < 1) throw Error(ErrorKind::InvalidParameter, "make_blocked: dim must be >= 1");
  if (spec.block_size < 1) {
    throw Error(ErrorKind::InvalidParameter, "make_blocked: block_size must be >= 1");
  }
  check_rho(spec);
  const Eigen::Index block = spec.block_size;
  if (spec.block_policy == BlockPolicy::Strict && dim % block != 0) {
    throw Error(ErrorKind::InvalidParameter,
                "make_blocked: dim " + std::to_string(dim) + " is not a multiple of block size " +
                    std::to_string(block));
  }
  const StructureKind base = base_kind(spec.kind);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  const std::string context = "make_blocked(" + to_string(spec.kind) + ")";
  for (Eigen::Index start = 0; start < dim; start += block) {
    const Eigen::Index size = std::min(block, dim - start);
    const Eigen::MatrixXd b = base_matrix(base, spec.rho, spec.ma_form, size);
    require_positive_definite(b, 0.0, context.c_str());
    m.block(start, start, size, size) = b;
  }
  return assemble_checked(std::move(m));
}

StructureKind parse_structure_kind(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "ar1") return StructureKind::AR1;
  if (s == "ma1") return StructureKind::MA1;
  if (s == "ma2") return StructureKind::MA2;
  if (s == "bar1") return StructureKind::BAR1;
  if (s == "bma1") return StructureKind::BMA1;
  if (s == "bma2") return StructureKind::BMA2;
  if (s == "equi" || s == "equicorrelation") return StructureKind::Equicorrelation;
  if (s == "identity" || s == "id") return StructureKind::Identity;
  throw Error(ErrorKind::InvalidParameter, "unknown structure kind '" + s + "'");
}

std::string to_string(StructureKind kind) {
  switch (kind) {
    case StructureKind::AR1: return "ar1";
    case StructureKind::MA1: return "ma1";
    case StructureKind::MA2: return "ma2";
    case StructureKind::BAR1: return "bar1";
    case StructureKind::BMA1: return "bma1";
    case StructureKind::BMA2: return "bma2";
    case StructureKind::Equicorrelation: return "equicorrelation";
    case StructureKind::Identity: return "identity";
  }
  return "unknown";
}

MaForm parse_ma_form(std::string_view name) {
  if (name == "banded") return MaForm::Banded;
  if (name == "process") return MaForm::Process;
  throw Error(ErrorKind::InvalidParameter, "unknown MA form '" + std::string(name) + "'");
}

std::string to_string(MaForm form) { return form == MaForm::Banded ? "banded" : "process"; }

}  // namespace dasp
