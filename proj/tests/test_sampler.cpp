#include <cmath>

#include <doctest.h>

#include "dasp/diagnostics.hpp"
#include "dasp/error.hpp"
#include "dasp/prior_analytics.hpp"
#include "dasp/sampler.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace dasp;
using testutil::error_kind_of;

namespace {

RegressionDataset sparse_data(std::uint64_t seed, Eigen::Index n, Eigen::Index p, double noise = 1.0) {
  gen::Engine g(seed);
  RegressionDataset d;
  d.x = gen::gaussian(g, n, p);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(p);
  b(0) = 3.0;
  if (p > 2) b(2) = -2.0;
  d.y = (d.x * b).array() + 1.5;
  std::normal_distribution<double> z;
  for (Eigen::Index i = 0; i < n; ++i) d.y(i) += noise * z(g);
  d.b_true = b;
  return d;
}

McmcConfig short_config(std::uint64_t seed) {
  McmcConfig c;
  c.chains = 2;
  c.warmup = 300;
  c.draws = 300;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_SUITE("sampler") {
  TEST_CASE("fixed scales reproduce the conjugate posterior") {
    const RegressionDataset data = sparse_data(3, 40, 4);
    const CorrelationMatrix omega = make_structure({StructureKind::AR1, 0.6}, 4);
    const Eigen::VectorXd lam = Eigen::Vector4d(0.5, 1.0, 2.0, 0.8);
    McmcConfig cfg;
    cfg.chains = 2;
    cfg.warmup = 10;
    cfg.draws = 4000;
    cfg.seed = 9;
    cfg.fit_intercept = false;
    cfg.fixed_scales = FixedScales{lam, 0.9, 1.1};
    const PosteriorDraws draws = fit_with_omega(data, default_spec(PriorKind::HS, data.x, data.y), omega, cfg);
    const oracle::Moments o = oracle::conjugate_posterior(data.x, data.y, lam, 0.9, 1.1, omega.matrix());
    const Eigen::MatrixXd b = draws.stacked_b();
    const Eigen::VectorXd mean = b.colwise().mean();
    for (Eigen::Index j = 0; j < 4; ++j) {
      const double se = std::sqrt(o.covariance(j, j) / double(b.rows()));
      CHECK(std::abs(mean(j) - o.mean(j)) < 4.0 * se);
    }
    CHECK((draws.stacked_sigma().array() == 1.1).all());
    CHECK((draws.stacked_intercept().array() == 0.0).all());
  }

  TEST_CASE("same seed gives identical draws whatever the thread count") {
    const RegressionDataset data = sparse_data(4, 30, 5);
    const PriorSpec prior = default_spec(PriorKind::HS, data.x, data.y);
    McmcConfig a = short_config(21);
    McmcConfig b = a;
    b.jobs = 2;
    const PosteriorDraws da = fit(data, prior, OmegaSpec{}, a);
    const PosteriorDraws db = fit(data, prior, OmegaSpec{}, b);
    for (int c = 0; c < 2; ++c) {
      CHECK(da.chains[std::size_t(c)].b == db.chains[std::size_t(c)].b);
      CHECK(da.chains[std::size_t(c)].sigma == db.chains[std::size_t(c)].sigma);
    }
    CHECK(da.chains[0].b != da.chains[1].b);
    McmcConfig other = a;
    other.seed = 22;
    CHECK(fit(data, prior, OmegaSpec{}, other).chains[0].b != da.chains[0].b);
  }

  TEST_CASE("output shapes, thinning and manifest") {
    const RegressionDataset data = sparse_data(5, 25, 3);
    McmcConfig cfg = short_config(1);
    cfg.draws = 100;
    cfg.thin = 2;
    const PosteriorDraws d = fit(data, default_spec(PriorKind::R2D2, data.x, data.y), OmegaSpec{}, cfg);
    CHECK(d.n_chains() == 2);
    CHECK(d.n_draws() == 100);  // draws counts kept draws; thin stretches the run
    CHECK(d.p() == 3);
    CHECK(d.chains[0].log_lik.cols() == 25);
    CHECK(d.stacked_b().rows() == 200);
    CHECK(d.b_by_chain(1).rows() == 2);
    CHECK(d.manifest["omega_mode"] == "identity");
    CHECK(d.manifest.contains("mcmc"));
  }

  TEST_CASE("every prior kind recovers a strong sparse signal") {
    const RegressionDataset data = sparse_data(6, 80, 6, 0.5);
    for (PriorKind kind : {PriorKind::BP, PriorKind::DL, PriorKind::HS, PriorKind::RHS, PriorKind::NG, PriorKind::R2D2}) {
      CAPTURE(to_string(kind));
      const PosteriorDraws d = fit(data, default_spec(kind, data.x, data.y), OmegaSpec{}, short_config(7));
      const Eigen::VectorXd mean = d.stacked_b().colwise().mean();
      CHECK(mean(0) == doctest::Approx(3.0).epsilon(0.1));
      CHECK(mean(2) == doctest::Approx(-2.0).epsilon(0.1));
      CHECK(std::abs(mean(1)) < 0.3);
      CHECK(d.stacked_intercept().mean() == doctest::Approx(1.5).epsilon(0.15));
      CHECK(d.stacked_sigma().mean() == doctest::Approx(0.5).epsilon(0.3));
      // Signal coefficients and sigma must have mixed. Null coefficients under the
      // spikier priors (NG learns a small shape) move slowly near zero, so they get
      // a looser bound at this chain length.
      for (const auto& pd : diagnose(d).parameters) {
        if (!pd.rhat) continue;
        CAPTURE(pd.name);
        const bool signal = pd.name == "b[1]" || pd.name == "b[3]" || pd.name == "sigma";
        CHECK(*pd.rhat < (signal ? 1.05 : 1.3));
      }
    }
  }

  TEST_CASE("DASP fit with an estimated Omega runs for p > n") {
    const RegressionDataset data = sparse_data(8, 15, 30);
    const PosteriorDraws d =
        fit(data, default_spec(PriorKind::HS, data.x, data.y), OmegaSpec{LedoitWolfOmega{}}, short_config(3));
    CHECK(d.stacked_b().allFinite());
    CHECK(d.manifest["omega_mode"] == "ledoit-wolf");
  }

  TEST_CASE("invalid configurations") {
    const RegressionDataset data = sparse_data(9, 10, 2);
    const PriorSpec prior = default_spec(PriorKind::HS, data.x, data.y);
    McmcConfig bad = short_config(1);
    bad.chains = 0;
    CHECK(error_kind_of([&] { fit(data, prior, OmegaSpec{}, bad); }) == ErrorKind::InvalidParameter);
    McmcConfig neg = short_config(1);
    neg.fixed_scales = FixedScales{Eigen::Vector2d(1.0, -1.0), 1.0, 1.0};
    CHECK(error_kind_of([&] { fit(data, prior, OmegaSpec{}, neg); }) == ErrorKind::InvalidParameter);
    RegressionDataset broken = data;
    broken.y(0) = std::nan("");
    CHECK(error_kind_of([&] { fit(broken, prior, OmegaSpec{}, short_config(1)); }) == ErrorKind::InvalidParameter);
    CHECK(error_kind_of([&] { fit_with_omega(data, prior, CorrelationMatrix::identity(3), short_config(1)); }) ==
          ErrorKind::InvalidParameter);
  }
}
