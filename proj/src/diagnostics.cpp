#include "dasp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

#include <boost/math/distributions/normal.hpp>
#include <unsupported/Eigen/FFT>

#include "dasp/error.hpp"

namespace dasp {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

void require_shape(const MatrixXd& draws, Index min_chains) {
  if (draws.rows() < min_chains || draws.cols() < 4) {
    throw Error(ErrorKind::InsufficientDraws, "need at least " + std::to_string(min_chains) +
                                                  " chains of at least 4 draws");
  }
  if (!draws.allFinite()) throw Error(ErrorKind::NonFiniteTarget, "non-finite draws in diagnostics");
}

bool all_equal(const MatrixXd& d) { return d.maxCoeff() == d.minCoeff(); }

// Each chain cut into two halves; the middle draw is dropped for odd lengths.
MatrixXd split_chains(const MatrixXd& d) {
  const Index half = d.cols() / 2;
  MatrixXd out(2 * d.rows(), half);
  for (Index c = 0; c < d.rows(); ++c) {
    out.row(2 * c) = d.row(c).head(half);
    out.row(2 * c + 1) = d.row(c).tail(half);
  }
  return out;
}

// Normal scores of pooled ranks, ties sharing their average rank.
MatrixXd rank_normalize(const MatrixXd& d) {
  const Index s = d.size();
  std::vector<Index> idx(static_cast<std::size_t>(s));
  std::iota(idx.begin(), idx.end(), Index(0));
  const double* v = d.data();
  std::stable_sort(idx.begin(), idx.end(), [v](Index a, Index b) { return v[a] < v[b]; });
  MatrixXd out(d.rows(), d.cols());
  double* o = out.data();
  const boost::math::normal_distribution<double> std_normal;
  for (Index i = 0; i < s;) {
    Index k = i;
    while (k + 1 < s && v[idx[std::size_t(k + 1)]] == v[idx[std::size_t(i)]]) ++k;
    const double rank = 0.5 * double(i + k) + 1.0;
    const double z = boost::math::quantile(std_normal, (rank - 0.375) / (double(s) + 0.25));
    for (Index t = i; t <= k; ++t) o[idx[std::size_t(t)]] = z;
    i = k + 1;
  }
  return out;
}

double median(const MatrixXd& d) {
  std::vector<double> v(d.data(), d.data() + d.size());
  const std::size_t m = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + long(m), v.end());
  double med = v[m];
  if (v.size() % 2 == 0) med = 0.5 * (med + *std::max_element(v.begin(), v.begin() + long(m)));
  return med;
}

// Split-free R-hat of the given chains.
double rhat_core(const MatrixXd& d) {
  const double n = double(d.cols());
  const VectorXd means = d.rowwise().mean();
  VectorXd vars(d.rows());
  for (Index c = 0; c < d.rows(); ++c) {
    vars(c) = (d.row(c).array() - means(c)).square().sum() / (n - 1.0);
  }
  const double w = vars.mean();
  const double b_over_n = (means.array() - means.mean()).square().sum() / double(d.rows() - 1);
  if (w <= 0.0) return b_over_n > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  const double var_plus = (n - 1.0) / n * w + b_over_n;
  return std::sqrt(var_plus / w);
}

// Autocovariance of one chain at lags 0..n-1 (biased, divides by n), by FFT.
VectorXd autocovariance(const VectorXd& x) {
  const Index n = x.size();
  Index m = 1;
  while (m < 2 * n) m <<= 1;
  std::vector<double> buf(std::size_t(m), 0.0);
  const double mean = x.mean();
  for (Index i = 0; i < n; ++i) buf[std::size_t(i)] = x(i) - mean;
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> freq;
  fft.fwd(freq, buf);
  for (auto& f : freq) f = std::complex<double>(std::norm(f), 0.0);
  std::vector<double> back;
  fft.inv(back, freq);
  VectorXd out(n);
  for (Index k = 0; k < n; ++k) out(k) = back[std::size_t(k)] / double(n);
  return out;
}

double ess_core(const MatrixXd& d) {
  const Index m = d.rows();
  const Index n = d.cols();
  MatrixXd acov(m, n);
  VectorXd means(m);
  for (Index c = 0; c < m; ++c) {
    acov.row(c) = autocovariance(d.row(c).transpose()).transpose();
    means(c) = d.row(c).mean();
  }
  const double dn = double(n);
  const VectorXd mean_acov = acov.colwise().mean().transpose();
  const double w = mean_acov(0) * dn / (dn - 1.0);
  double var_plus = w * (dn - 1.0) / dn;
  if (m > 1) var_plus += (means.array() - means.mean()).square().sum() / double(m - 1);
  if (!(var_plus > 0.0)) return std::numeric_limits<double>::quiet_NaN();

  auto rho = [&](Index t) { return 1.0 - (w - mean_acov(t)) / var_plus; };
  // Geyer initial positive sequence on lag pairs, then made monotone.
  std::vector<double> pairs;
  for (Index t = 0; t + 1 < n; t += 2) {
    const double pr = rho(t) + rho(t + 1);
    if (pr < 0.0) break;
    pairs.push_back(pr);
  }
  for (std::size_t k = 1; k < pairs.size(); ++k) pairs[k] = std::min(pairs[k], pairs[k - 1]);
  double tau = -1.0;
  for (double pr : pairs) tau += 2.0 * pr;
  const double total = double(m) * dn;
  tau = std::max(tau, 1.0 / std::log10(total));
  return total / tau;
}

}  // namespace

double split_rhat_raw(const MatrixXd& draws) {
  require_shape(draws, 1);
  return rhat_core(split_chains(draws));
}

std::optional<double> rhat(const MatrixXd& draws) {
  require_shape(draws, 2);
  if (all_equal(draws)) return std::nullopt;
  const MatrixXd split = split_chains(draws);
  const double bulk = rhat_core(rank_normalize(split));
  const double med = median(draws);
  const MatrixXd folded = (split.array() - med).abs().matrix();
  const double tail = all_equal(folded) ? 1.0 : rhat_core(rank_normalize(folded));
  return std::max(bulk, tail);
}

double ess_raw(const MatrixXd& draws) {
  require_shape(draws, 1);
  return ess_core(split_chains(draws));
}

std::optional<double> ess(const MatrixXd& draws) {
  require_shape(draws, 1);
  if (all_equal(draws)) return std::nullopt;
  const double v = ess_core(rank_normalize(split_chains(draws)));
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

double Diagnostics::max_rhat() const {
  double m = std::numeric_limits<double>::quiet_NaN();
  for (const auto& p : parameters) {
    if (p.rhat && !(m >= *p.rhat)) m = *p.rhat;
  }
  return m;
}

double Diagnostics::min_ess() const {
  double m = std::numeric_limits<double>::quiet_NaN();
  for (const auto& p : parameters) {
    if (p.ess_bulk && !(m <= *p.ess_bulk)) m = *p.ess_bulk;
  }
  return m;
}

Diagnostics diagnose(const PosteriorDraws& draws) {
  Diagnostics out;
  if (draws.n_chains() < 1 || draws.n_draws() < 4) {
    throw Error(ErrorKind::InsufficientDraws, "need at least 4 draws for diagnostics");
  }
  const bool multi = draws.n_chains() >= 2;
  auto add = [&](const std::string& name, const MatrixXd& m) {
    ParameterDiagnostic d{name, std::nullopt, ess(m)};
    if (multi) d.rhat = rhat(m);
    out.parameters.push_back(std::move(d));
  };
  for (Index j = 0; j < draws.p(); ++j) add("b[" + std::to_string(j + 1) + "]", draws.b_by_chain(j));
  add("sigma", draws.sigma_by_chain());
  add("tau", draws.tau_by_chain());
  {
    MatrixXd a(draws.n_chains(), draws.n_draws());
    for (int c = 0; c < draws.n_chains(); ++c) a.row(c) = draws.chains[std::size_t(c)].intercept.transpose();
    add("intercept", a);
  }
  const Index run_limit = std::max<Index>(50, draws.n_draws() / 20);
  for (const auto& ch : draws.chains) {
    Index longest = 1;
    Index run = 1;
    for (Index i = 1; i < ch.sigma.size(); ++i) {
      run = ch.sigma(i) == ch.sigma(i - 1) ? run + 1 : 1;
      longest = std::max(longest, run);
    }
    const bool sigma_fixed = ch.sigma.maxCoeff() == ch.sigma.minCoeff() && ch.sigma_step == 0.0;
    out.stuck_chains.push_back(!sigma_fixed && (longest >= run_limit || ch.sigma_accept < 0.05));
  }
  return out;
}

}  // namespace dasp
