#include "dasp/loo.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "dasp/error.hpp"
#include "dasp/metrics.hpp"
#include "dasp/parallel.hpp"

namespace dasp {

using Eigen::Index;
using Eigen::VectorXd;

std::uint64_t fold_seed(std::uint64_t seed, Index fold) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(fold), std::uint32_t(0x100f)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (std::uint64_t(out[0]) << 32) | out[1];
}

LooResult loo_exact(const RegressionDataset& data, const PriorSpec& prior, const OmegaSpec& omega,
                    const McmcConfig& config, const LooOptions& options) {
  const Index n = data.n();
  if (n < 3) throw Error(ErrorKind::InvalidParameter, "exact LOO needs n >= 3");
  if (n > options.max_n) {
    throw Error(ErrorKind::InvalidParameter, "exact LOO refuses n = " + std::to_string(n) + " > max_n = " +
                                                 std::to_string(options.max_n));
  }
  LooResult out;
  out.pointwise = VectorXd::Constant(n, std::numeric_limits<double>::quiet_NaN());
  std::vector<char> failed(std::size_t(n), 0);

  parallel_for(n, options.jobs, [&](long i) {
    std::vector<Index> rows;
    for (Index r = 0; r < n; ++r) {
      if (r != i) rows.push_back(r);
    }
    const RegressionDataset train = subset_rows(data, rows);
    const RegressionDataset held = subset_rows(data, {Index(i)});
    McmcConfig cfg = config;
    cfg.seed = fold_seed(config.seed, i);
    cfg.jobs = 1;
    try {
      const PosteriorDraws draws = fit(train, prior, omega, cfg);
      const double v = elpd_pointwise(draws, held)(0);
      if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteTarget, "non-finite fold score");
      out.pointwise(i) = v;
    } catch (const Error& e) {
      if (!is_numerical(e.kind())) throw;
      failed[std::size_t(i)] = 1;
    }
  });

  for (Index i = 0; i < n; ++i) {
    if (failed[std::size_t(i)]) {
      out.failed_folds.push_back(i);
    } else {
      out.elpd_loo += out.pointwise(i);
    }
  }
  out.flagged = !out.failed_folds.empty();
  if (Index(out.failed_folds.size()) == n) throw Error(ErrorKind::FoldFailure, "every LOO fold failed");
  return out;
}

LooComparison compare(const LooResult& a, const LooResult& b) {
  if (a.pointwise.size() != b.pointwise.size()) {
    throw Error(ErrorKind::PairingMismatch, "LOO results cover different numbers of folds");
  }
  std::vector<double> diff;
  for (Index i = 0; i < a.pointwise.size(); ++i) {
    if (std::isfinite(a.pointwise(i)) && std::isfinite(b.pointwise(i))) diff.push_back(a.pointwise(i) - b.pointwise(i));
  }
  LooComparison c;
  c.n_used = Index(diff.size());
  if (diff.empty()) throw Error(ErrorKind::EmptySubset, "no folds succeeded in both runs");
  double sum = 0.0;
  for (double d : diff) sum += d;
  c.delta_elpd = sum;
  if (diff.size() > 1) {
    const double mean = sum / double(diff.size());
    double ss = 0.0;
    for (double d : diff) ss += (d - mean) * (d - mean);
    c.se = std::sqrt(double(diff.size()) * ss / double(diff.size() - 1));
  }
  return c;
}

}  // namespace dasp
