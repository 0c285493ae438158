#include "dasp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dasp/distributions.hpp"
#include "dasp/error.hpp"
#include "dasp/linalg.hpp"

namespace dasp {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

void check_truth(const MatrixXd& b_draws, const VectorXd& b_true) {
  if (b_draws.rows() < 1) throw Error(ErrorKind::InsufficientDraws, "no posterior draws");
  if (b_draws.cols() != b_true.size()) throw Error(ErrorKind::InvalidParameter, "draws and b_true differ in p");
}

struct Interval {
  double lo, hi;
};

std::vector<Interval> intervals(const MatrixXd& b_draws, double level) {
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorKind::InvalidParameter, "level must be in (0, 1)");
  const double tail = 0.5 * (1.0 - level);
  std::vector<Interval> out;
  out.reserve(std::size_t(b_draws.cols()));
  std::vector<double> col(static_cast<std::size_t>(b_draws.rows()));
  for (Index j = 0; j < b_draws.cols(); ++j) {
    for (Index s = 0; s < b_draws.rows(); ++s) col[std::size_t(s)] = b_draws(s, j);
    std::sort(col.begin(), col.end());
    out.push_back({quantile(col, tail), quantile(col, 1.0 - tail)});
  }
  return out;
}

std::optional<double> ratio(long num, long den) {
  if (den == 0) return std::nullopt;
  return double(num) / double(den);
}

}  // namespace

VectorXd elpd_pointwise(const PosteriorDraws& draws, const RegressionDataset& test) {
  if (draws.total_draws() < 1) throw Error(ErrorKind::InsufficientDraws, "no posterior draws");
  if (test.p() != draws.p()) throw Error(ErrorKind::InvalidParameter, "test design has wrong p");
  const MatrixXd b = draws.stacked_b();
  const VectorXd a = draws.stacked_intercept();
  const VectorXd s = draws.stacked_sigma();
  const Index n_s = b.rows();
  const MatrixXd mu = test.x * b.transpose();  // n_test x S
  const double log_norm = 0.5 * std::log(2.0 * std::numbers::pi);
  VectorXd out(test.n());
  std::vector<double> lp(static_cast<std::size_t>(n_s));
  for (Index i = 0; i < test.n(); ++i) {
    for (Index k = 0; k < n_s; ++k) {
      const double z = (test.y(i) - a(k) - mu(i, k)) / s(k);
      lp[std::size_t(k)] = -log_norm - std::log(s(k)) - 0.5 * z * z;
    }
    out(i) = dist::log_sum_exp(lp.data(), long(n_s)) - std::log(double(n_s));
  }
  return out;
}

double elpd(const PosteriorDraws& draws, const RegressionDataset& test) { return elpd_pointwise(draws, test).sum(); }

RmseSplit rmse_split(const MatrixXd& b_draws, const VectorXd& b_true) {
  check_truth(b_draws, b_true);
  const Index p = b_true.size();
  VectorXd per(p);
  for (Index j = 0; j < p; ++j) {
    per(j) = std::sqrt((b_draws.col(j).array() - b_true(j)).square().mean());
  }
  RmseSplit out;
  out.all = per.mean();
  double sz = 0.0, snz = 0.0;
  long nz = 0, nnz = 0;
  for (Index j = 0; j < p; ++j) {
    if (b_true(j) == 0.0) {
      sz += per(j);
      ++nz;
    } else {
      snz += per(j);
      ++nnz;
    }
  }
  if (nz > 0) out.zero = sz / double(nz);
  if (nnz > 0) out.nonzero = snz / double(nnz);
  return out;
}

RmseSplit rmse_split(const PosteriorDraws& draws, const VectorXd& b_true) {
  return rmse_split(draws.stacked_b(), b_true);
}

double quantile(std::vector<double> v, double prob) {
  if (v.empty()) throw Error(ErrorKind::InsufficientDraws, "quantile of an empty sample");
  if (!std::is_sorted(v.begin(), v.end())) std::sort(v.begin(), v.end());
  const double h = (double(v.size()) - 1.0) * prob;
  const auto lo = std::size_t(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - double(lo)) * (v[hi] - v[lo]);
}

CoverageRecord coverage_metrics(const MatrixXd& b_draws, const VectorXd& b_true, double level) {
  check_truth(b_draws, b_true);
  const auto iv = intervals(b_draws, level);
  CoverageRecord r;
  r.level = level;
  long covered = 0, covered_zero = 0, covered_nonzero = 0;
  long n_zero = 0, n_nonzero = 0, tp = 0, tn = 0;
  double width = 0.0;
  for (std::size_t j = 0; j < iv.size(); ++j) {
    const double truth = b_true(Index(j));
    const bool cover = iv[j].lo <= truth && truth <= iv[j].hi;
    const bool selected = iv[j].lo > 0.0 || iv[j].hi < 0.0;
    width += iv[j].hi - iv[j].lo;
    covered += cover;
    if (truth == 0.0) {
      ++n_zero;
      covered_zero += cover;
      tn += !selected;
    } else {
      ++n_nonzero;
      covered_nonzero += cover;
      tp += selected;
    }
  }
  const double p = double(iv.size());
  r.coverage = double(covered) / p;
  r.avg_width = width / p;
  r.sensitivity = ratio(tp, n_nonzero);
  r.specificity = ratio(tn, n_zero);
  r.coverage_zero = ratio(covered_zero, n_zero);
  r.coverage_nonzero = ratio(covered_nonzero, n_nonzero);
  return r;
}

CoverageRecord coverage_metrics(const PosteriorDraws& draws, const VectorXd& b_true, double level) {
  return coverage_metrics(draws.stacked_b(), b_true, level);
}

std::vector<double> default_roc_levels() {
  std::vector<double> v;
  for (int k = 1; k <= 99; ++k) v.push_back(k / 100.0);
  v.push_back(0.995);
  v.push_back(0.999);
  return v;
}

std::vector<RocPoint> roc_curve(const MatrixXd& b_draws, const VectorXd& b_true, const std::vector<double>& levels) {
  check_truth(b_draws, b_true);
  std::vector<RocPoint> out;
  for (double level : levels) {
    const CoverageRecord r = coverage_metrics(b_draws, b_true, level);
    if (!r.sensitivity || !r.specificity) {
      throw Error(ErrorKind::EmptySubset, "ROC needs both zero and nonzero true coefficients");
    }
    out.push_back({level, 1.0 - *r.specificity, *r.sensitivity});
  }
  std::sort(out.begin(), out.end(), [](const RocPoint& a, const RocPoint& b) {
    if (a.fpr != b.fpr) return a.fpr < b.fpr;
    if (a.tpr != b.tpr) return a.tpr < b.tpr;
    return a.level > b.level;
  });
  return out;
}

double delta(double metric_with_omega, double metric_without) { return metric_with_omega - metric_without; }

void check_pairing(const nlohmann::json& a, const nlohmann::json& b) {
  auto field = [](const nlohmann::json& j, const char* key) {
    return j.contains(key) ? j.at(key) : nlohmann::json();
  };
  for (const char* key : {"data_id", "prior", "mcmc", "n", "p"}) {
    if (field(a, key) != field(b, key)) {
      throw Error(ErrorKind::PairingMismatch, std::string("paired runs differ in '") + key + "'");
    }
  }
}

double paired_delta(const nlohmann::json& with_manifest, double metric_with, const nlohmann::json& without_manifest,
                    double metric_without) {
  check_pairing(with_manifest, without_manifest);
  return delta(metric_with, metric_without);
}

double effective_parameters_general(const MatrixXd& xtx, const VectorXd& lambda, double tau,
                                    const MatrixXd& omega_chol_l) {
  const VectorXd s = tau * lambda;
  const MatrixXd g = s.asDiagonal() * omega_chol_l;
  const MatrixXd m = linalg::symmetrize(g.transpose() * xtx * g);
  const VectorXd mu = linalg::symmetric_eigenvalues(m).cwiseMax(0.0);
  return (mu.array() / (1.0 + mu.array())).sum();
}

double meff_posterior_mean(const PosteriorDraws& draws, const MatrixXd& x, const CorrelationMatrix& omega,
                           Index max_draws) {
  const Index total = draws.total_draws();
  if (total < 1) throw Error(ErrorKind::InsufficientDraws, "no posterior draws");
  if (omega.dim() != x.cols()) throw Error(ErrorKind::InvalidParameter, "Omega and X differ in p");
  const MatrixXd xtx = x.transpose() * x;
  const MatrixXd l = omega.is_identity()
                         ? MatrixXd::Identity(omega.dim(), omega.dim())
                         : MatrixXd(linalg::cholesky(omega.matrix(), ErrorKind::NonPositiveDefinite, "Omega").matrixL());
  const Index use = std::min(total, std::max<Index>(max_draws, 1));
  const Index nd = draws.n_draws();
  double sum = 0.0;
  for (Index k = 0; k < use; ++k) {
    const Index g = use == 1 ? 0 : Index(std::llround(double(k) * double(total - 1) / double(use - 1)));
    const auto& ch = draws.chains[std::size_t(g / nd)];
    const Index d = g % nd;
    sum += effective_parameters_general(xtx, ch.lambda.row(d).transpose(), ch.tau(d), l);
  }
  return sum / double(use);
}

MetricsReport compute_metrics(const PosteriorDraws& draws, const RegressionDataset& train,
                              const RegressionDataset& test, const CorrelationMatrix& omega) {
  if (!train.b_true) throw Error(ErrorKind::InvalidParameter, "metrics need the true coefficients");
  MetricsReport r;
  const MatrixXd b = draws.stacked_b();
  r.elpd = elpd(draws, test);
  r.rmse = rmse_split(b, *train.b_true);
  r.coverage = coverage_metrics(b, *train.b_true);
  r.meff_posterior_mean = meff_posterior_mean(draws, train.x, omega);
  return r;
}

}  // namespace dasp
