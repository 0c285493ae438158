#include <doctest.h>

#include "dasp/cov_estimation.hpp"
#include "dasp/error.hpp"
#include "dasp/linalg.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace dasp;

namespace {

double max_rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

}  // namespace

TEST_SUITE("cov_estimation") {
  TEST_CASE("sample covariance matches the loop oracle") {
    gen::for_cases(20, 101, [](gen::Engine& g, int) {
      const Eigen::MatrixXd x = gen::design(g, gen::integer(g, 3, 30), gen::integer(g, 1, 8));
      CHECK(max_rel_diff(sample_covariance(x), oracle::ledoit_wolf(x).s) < 1e-12);
    });
  }

  TEST_CASE("property: Ledoit-Wolf quantities match the loop oracle") {
    gen::for_cases(50, 202, [](gen::Engine& g, int) {
      const Eigen::Index n = gen::integer(g, 3, 40);
      const Eigen::Index p = gen::integer(g, 1, 25);
      const Eigen::MatrixXd x = gen::design(g, n, p);
      const LedoitWolfResult lw = ledoit_wolf(x);
      const oracle::LedoitWolf o = oracle::ledoit_wolf(x);
      CHECK(lw.m_n == doctest::Approx(o.m).epsilon(1e-10));
      CHECK(lw.d_n2 == doctest::Approx(o.d2).epsilon(1e-10));
      CHECK(lw.b_n2 == doctest::Approx(o.b2).epsilon(1e-10));
      CHECK(std::abs(lw.a_n2 - o.a2) <= 1e-10 * std::max(1.0, o.d2));
      CHECK(max_rel_diff(lw.s_star, o.s_star) < 1e-10);
      CHECK(lw.b_n2 <= lw.d_n2);
      CHECK(lw.target_weight() >= 0.0);
      CHECK(lw.target_weight() <= 1.0);
    });
  }

  TEST_CASE("property: shrinkage keeps eigenvectors and mixes eigenvalues convexly") {
    gen::for_cases(50, 303, [](gen::Engine& g, int) {
      const Eigen::Index n = gen::integer(g, 5, 40);
      const Eigen::Index p = gen::integer(g, 2, 15);
      const LedoitWolfResult lw = ledoit_wolf(gen::design(g, n, p));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lw.sample_cov);
      const Eigen::MatrixXd& v = es.eigenvectors();
      // Rotating S* into S's eigenbasis must give a diagonal matrix whose
      // entries are w m + (1 - w) l_i.
      const Eigen::MatrixXd rotated = v.transpose() * lw.s_star * v;
      const double w = lw.target_weight();
      const double scale = std::max(1.0, lw.s_star.cwiseAbs().maxCoeff());
      for (Eigen::Index i = 0; i < p; ++i) {
        CHECK(rotated(i, i) == doctest::Approx(w * lw.m_n + (1.0 - w) * es.eigenvalues()(i)).epsilon(1e-10).scale(scale));
        for (Eigen::Index j = 0; j < p; ++j) {
          if (i != j) CHECK(std::abs(rotated(i, j)) <= 1e-10 * scale);
        }
      }
    });
  }

  TEST_CASE("p > n: S is singular and S* is positive definite") {
    gen::Engine g(7);
    const Eigen::MatrixXd x = gen::gaussian(g, 20, 120);
    const LedoitWolfResult lw = ledoit_wolf(x);
    const Eigen::VectorXd ev_s = linalg::symmetric_eigenvalues(lw.sample_cov);
    const Eigen::VectorXd ev_star = linalg::symmetric_eigenvalues(lw.s_star);
    CHECK(std::abs(ev_s(0)) < 1e-10 * ev_s(ev_s.size() - 1));
    CHECK(ev_star(0) > 0.01 * lw.m_n);
    CHECK_NOTHROW(build_omega(x, OmegaSpec{LedoitWolfOmega{}}));
    CHECK_THROWS_AS(build_omega(x, OmegaSpec{SampleCovOmega{}}), Error);
  }

  TEST_CASE("zero spread returns m_n I") {
    // Centered columns orthogonal with equal norms: S is a multiple of I.
    Eigen::MatrixXd x(4, 2);
    x << 1, 1, -1, 1, 1, -1, -1, -1;
    const LedoitWolfResult lw = ledoit_wolf(x);
    CHECK(lw.degenerate);
    CHECK(lw.m_n == doctest::Approx(4.0 / 3.0));
    CHECK(lw.s_star.isApprox(lw.m_n * Eigen::MatrixXd::Identity(2, 2), 1e-14));
    CHECK(lw.target_weight() == 1.0);

    const LedoitWolfResult flat = ledoit_wolf(Eigen::MatrixXd::Constant(6, 3, 2.5));
    CHECK(flat.degenerate);
    CHECK(flat.s_star.isZero(0.0));
  }

  TEST_CASE("known covariance gives minus the partial correlations") {
    const std::vector<Eigen::MatrixXd> sigmas = {
        make_structure({StructureKind::AR1, 0.7}, 6).matrix(),
        make_structure({StructureKind::MA1, 0.45, 5, MaForm::Banded}, 6).matrix(),
        make_structure({StructureKind::Equicorrelation, 0.4}, 5).matrix(),
        make_blocked({StructureKind::BMA1, 0.95, 5, MaForm::Process}, 10).matrix()};
    for (const auto& s : sigmas) {
      const Eigen::MatrixXd scaled = 2.5 * s;  // scale must not matter
      const CorrelationMatrix omega = build_omega(Eigen::MatrixXd::Zero(3, s.rows()), OmegaSpec{KnownCovariance{scaled}});
      for (Eigen::Index i = 0; i < s.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < s.rows(); ++j) {
          CHECK(omega(i, j) == doctest::Approx(-oracle::partial_correlation(s, i, j)).epsilon(1e-10).scale(1.0));
        }
      }
    }
  }

  TEST_CASE("property: partial correlation identity on random covariances") {
    gen::for_cases(30, 404, [](gen::Engine& g, int) {
      const Eigen::Index p = gen::integer(g, 2, 12);
      const Eigen::MatrixXd s = gen::spd(g, p, 0.2);
      const CorrelationMatrix omega = build_omega(Eigen::MatrixXd::Zero(2, p), OmegaSpec{KnownCovariance{s}});
      const Eigen::Index i = gen::integer(g, 0, p - 1);
      Eigen::Index j = gen::integer(g, 0, p - 2);
      if (j >= i) ++j;
      CHECK(omega(i, j) == doctest::Approx(-oracle::partial_correlation(s, i, j)).epsilon(1e-10).scale(1.0));
    });
  }

  TEST_CASE("direct mode standardizes Sigma_X without inverting") {
    const Eigen::MatrixXd s = 4.0 * make_structure({StructureKind::AR1, 0.6}, 4).matrix();
    const CorrelationMatrix omega = build_omega(Eigen::MatrixXd::Zero(2, 4), OmegaSpec{DirectCovariance{s}});
    CHECK(omega(0, 1) == doctest::Approx(0.6));
    CHECK(omega(0, 3) == doctest::Approx(0.216));
  }

  TEST_CASE("sample and Ledoit-Wolf modes invert the estimate") {
    gen::Engine g(9);
    const Eigen::MatrixXd x = gen::design(g, 60, 5);
    const Eigen::MatrixXd s_inv = oracle::ledoit_wolf(x).s.inverse();
    const CorrelationMatrix sample = build_omega(x, OmegaSpec{SampleCovOmega{}});
    const CorrelationMatrix lw = build_omega(x, OmegaSpec{LedoitWolfOmega{}});
    const Eigen::MatrixXd lw_inv = oracle::ledoit_wolf(x).s_star.inverse();
    for (Eigen::Index i = 0; i < 5; ++i) {
      for (Eigen::Index j = 0; j < 5; ++j) {
        CHECK(sample(i, j) == doctest::Approx(s_inv(i, j) / std::sqrt(s_inv(i, i) * s_inv(j, j))).epsilon(1e-10));
        CHECK(lw(i, j) == doctest::Approx(lw_inv(i, j) / std::sqrt(lw_inv(i, i) * lw_inv(j, j))).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("errors") {
    const Eigen::MatrixXd x = Eigen::MatrixXd::Random(5, 3);
    CHECK_THROWS_AS(build_omega(x, OmegaSpec{KnownCovariance{Eigen::MatrixXd::Identity(2, 2)}}), Error);
    Eigen::Matrix3d singular = Eigen::Matrix3d::Ones();
    try {
      build_omega(x, OmegaSpec{KnownCovariance{singular}});
      FAIL("expected SingularCovariance");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::SingularCovariance);
    }
    try {
      cor_standardize(Eigen::Matrix2d(Eigen::Vector2d(1.0, -1.0).asDiagonal()));
      FAIL("expected NonPositiveDiagonal");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NonPositiveDiagonal);
    }
    CHECK_THROWS_AS(ledoit_wolf(Eigen::MatrixXd::Ones(1, 3)), Error);
  }

  TEST_CASE("mode names") {
    CHECK(omega_mode_name(OmegaSpec{}) == "identity");
    CHECK(omega_mode_name(OmegaSpec{LedoitWolfOmega{}}) == "ledoit-wolf");
    CHECK(omega_mode_name(OmegaSpec{KnownCovariance{}}) == "known");
    CHECK(omega_mode_name(OmegaSpec{DirectCovariance{}}) == "direct");
  }
}
