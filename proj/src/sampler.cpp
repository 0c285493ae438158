#include "dasp/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dasp/distributions.hpp"
#include "dasp/error.hpp"
#include "dasp/linalg.hpp"
#include "dasp/parallel.hpp"
#include "slice.hpp"

namespace dasp {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Log-scale bounds for every slice-sampled latent.
constexpr double kLogLo = -150.0;
constexpr double kLogHi = 150.0;
constexpr double kSliceWidth = 1.5;
constexpr double kTargetAccept = 0.44;

double clamp_lambda(double v) { return std::clamp(v, kLambdaFloor, kLambdaCeil); }

/// Tracks q = z' Omega^-1 z and sum(log s) for z = b / s, so that changing
/// one scale, or all scales by a common factor, is O(1) to evaluate.
class QuadForm {
 public:
  explicit QuadForm(const MatrixXd* omega_inv) : oinv_(omega_inv) {}

  void reset(const VectorXd& b, const VectorXd& s) {
    s_ = s;
    z_ = b.cwiseQuotient(s);
    w_ = oinv_ ? VectorXd(*oinv_ * z_) : z_;
    q_ = z_.dot(w_);
    logdet_ = s.array().log().sum();
  }

  double q() const { return q_; }
  double logdet() const { return logdet_; }
  const VectorXd& s() const { return s_; }

  /// (q, logdet) after s <- c s, then s_j <- r s_j (j < 0: common factor only).
  std::pair<double, double> peek(double c, Index j, double r) const {
    const double p = double(s_.size());
    if (j < 0) return {q_ / (c * c), logdet_ + p * std::log(c)};
    const double delta = z_(j) / r - z_(j);
    const double ojj = oinv_ ? (*oinv_)(j, j) : 1.0;
    const double qn = (q_ + 2.0 * delta * w_(j) + delta * delta * ojj) / (c * c);
    return {qn, logdet_ + p * std::log(c) + std::log(r)};
  }

  void commit(double c, Index j, double r) {
    if (j >= 0) {
      const double delta = z_(j) / r - z_(j);
      z_(j) += delta;
      if (oinv_) {
        w_ += delta * oinv_->col(j);
      } else {
        w_(j) += delta;
      }
      s_(j) *= r;
    }
    if (c != 1.0) {
      z_ /= c;
      w_ /= c;
      s_ *= c;
    }
    q_ = z_.dot(w_);
    logdet_ = s_.array().log().sum();
  }

  std::pair<double, double> peek_full(const VectorXd& b, const VectorXd& s) const {
    const VectorXd z = b.cwiseQuotient(s);
    const double q = oinv_ ? z.dot(*oinv_ * z) : z.squaredNorm();
    return {q, s.array().log().sum()};
  }

 private:
  const MatrixXd* oinv_;
  VectorXd s_, z_, w_;
  double q_ = 0.0;
  double logdet_ = 0.0;
};

/// lambda' = c lambda with lambda'_j additionally scaled by r; tau' = t tau.
struct Move {
  double c = 1.0;
  Index j = -1;
  double r = 1.0;
  double t = 1.0;
};

class ChainRunner {
 public:
  ChainRunner(const RegressionDataset& data, const PriorSpec& prior, const MatrixXd* omega_inv, const McmcConfig& config, std::uint64_t chain)
      : data_(data),
        prior_(prior),
        oinv_(omega_inv),
        cfg_(config),
        rng_(config.seed, chain),
        qf_(omega_inv),
        n_(data.n()),
        p_(data.p()) {
    xtx_ = data.x.transpose() * data.x;
    xty_ = data.x.transpose() * data.y;
    xsum_ = data.x.colwise().sum().transpose();
  }

  ChainDraws run() {
    initialize();
    const int total = cfg_.warmup + cfg_.draws * cfg_.thin;
    ChainDraws out;
    out.b.resize(cfg_.draws, p_);
    out.lambda.resize(cfg_.draws, p_);
    out.tau.resize(cfg_.draws);
    out.sigma.resize(cfg_.draws);
    out.intercept.resize(cfg_.draws);
    out.log_lik.resize(cfg_.draws, n_);
    long accepted_after_warmup = 0;
    long sigma_steps_after_warmup = 0;

    for (int it = 0; it < total; ++it) {
      const bool warm = it < cfg_.warmup;
      refresh_scales();
      if (clamp_active_) ++out.clamp_hits;
      update_b();
      if (cfg_.fit_intercept) update_intercept();
      qf_.reset(b_, current_s());
      if (!fixed()) {
        const bool acc = update_sigma(warm, it);
        if (!warm) {
          ++sigma_steps_after_warmup;
          accepted_after_warmup += acc ? 1 : 0;
        }
        update_scales();
      }
      if (!warm && (it - cfg_.warmup) % cfg_.thin == 0) {
        const Index d = (it - cfg_.warmup) / cfg_.thin;
        store(out, d);
      }
    }
    out.sigma_step = fixed() ? 0.0 : sigma_step_;
    out.sigma_accept =
        sigma_steps_after_warmup > 0 ? double(accepted_after_warmup) / double(sigma_steps_after_warmup) : 0.0;
    return out;
  }

 private:
  bool fixed() const { return cfg_.fixed_scales.has_value(); }

  void initialize() {
    if (fixed()) {
      const auto& f = *cfg_.fixed_scales;
      if (f.lambda.size() != p_) throw Error(ErrorKind::InvalidParameter, "fixed lambda has wrong length");
      lambda_ = f.lambda;
      tau_ = f.tau;
      sigma_ = f.sigma;
    } else {
      ScaleDraw init = sample_scales(prior_, p_, rng_);
      latent_ = std::move(init.latent);
      lambda_ = init.lambda;
      tau_ = init.tau;
      const double mean = data_.y.mean();
      const double var = n_ > 1 ? (data_.y.array() - mean).square().sum() / double(n_ - 1) : 1.0;
      sigma_ = var > 0.0 ? std::sqrt(var) : 1.0;
    }
    alpha_ = cfg_.fit_intercept ? data_.y.mean() : 0.0;
    b_ = VectorXd::Zero(p_);
    sigma_step_ = 0.5;
  }

  // Rebuilds the assembled scales from the latents, removing any drift
  // from the multiplicative bookkeeping during the previous sweep.
  void refresh_scales() {
    if (!fixed()) {
      lambda_ = local_scales(prior_, latent_);
      tau_ = global_scale(latent_);
    }
    clamp_active_ = (lambda_.array() < kLambdaFloor).any() || (lambda_.array() > kLambdaCeil).any();
    lam_min_ = lambda_.minCoeff();
    lam_max_ = lambda_.maxCoeff();
  }

  VectorXd current_s() const { return tau_ * lambda_.unaryExpr(&clamp_lambda); }

  void update_b() {
    const VectorXd inv_s = current_s().cwiseInverse();
    MatrixXd q = xtx_;
    if (oinv_) {
      q.noalias() += inv_s.asDiagonal() * (*oinv_) * inv_s.asDiagonal();
    } else {
      q.diagonal() += inv_s.cwiseAbs2();
    }
    const auto llt = linalg::cholesky(q, ErrorKind::NumericalSingularity, "Q factorization in b update");
    const VectorXd rhs = xty_ - alpha_ * xsum_;
    b_ = llt.solve(rhs);
    b_ += sigma_ * llt.matrixU().solve(rng_.normal_vector(p_));
    if (!b_.allFinite()) throw Error(ErrorKind::NonFiniteTarget, "non-finite coefficient draw");
  }

  void update_intercept() {
    const double resid_mean = (data_.y - data_.x * b_).mean();
    alpha_ = resid_mean + sigma_ / std::sqrt(double(n_)) * rng_.normal();
  }

  double rss() const { return ((data_.y - data_.x * b_).array() - alpha_).square().sum(); }

  bool update_sigma(bool warm, int it) {
    const double ss = rss() + qf_.q();
    const double np = double(n_ + p_);
    const auto& sp = prior_.sigma_prior;
    auto target = [&](double u) {
      const double s = std::exp(u);
      return -np * u - ss / (2.0 * s * s) + dist::half_student_t_lpdf(s, sp.nu, sp.eta) + u;
    };
    const double u0 = std::log(sigma_);
    const double u1 = u0 + sigma_step_ * rng_.normal();
    const double log_ratio = target(u1) - target(u0);
    const bool accept = std::isfinite(log_ratio) && std::log(rng_.uniform()) < log_ratio;
    if (accept) sigma_ = std::exp(u1);
    if (warm) {
      const double rate = std::pow(double(it) + 1.0, -0.6);
      sigma_step_ *= std::exp(rate * ((accept ? 1.0 : 0.0) - kTargetAccept));
      sigma_step_ = std::clamp(sigma_step_, 1e-4, 5.0);
    }
    return accept;
  }

  // Gaussian prior term of b for a scale move.
  double move_loglik(const Move& m) const {
    const double inv2s2 = 0.5 / (sigma_ * sigma_);
    if (needs_full(m)) {
      VectorXd lam = lambda_ * m.c;
      if (m.j >= 0) lam(m.j) *= m.r;
      const VectorXd s = (tau_ * m.t) * lam.unaryExpr(&clamp_lambda);
      const auto [q, ld] = qf_.peek_full(b_, s);
      return -ld - q * inv2s2;
    }
    const auto [q, ld] = qf_.peek(m.c * m.t, m.j, m.r);
    return -ld - q * inv2s2;
  }

  void commit_move(const Move& m) {
    const bool full = needs_full(m);
    lambda_ *= m.c;
    if (m.j >= 0) lambda_(m.j) *= m.r;
    tau_ *= m.t;
    if (full) {
      qf_.reset(b_, current_s());
    } else {
      qf_.commit(m.c * m.t, m.j, m.r);
    }
    if (m.c != 1.0 || full) {
      lam_min_ = lambda_.minCoeff();
      lam_max_ = lambda_.maxCoeff();
    } else if (m.j >= 0) {
      lam_min_ = std::min(lam_min_, lambda_(m.j));
      lam_max_ = std::max(lam_max_, lambda_(m.j));
    }
  }

  // The O(1) path is exact only while no affected lambda touches the clamp.
  bool needs_full(const Move& m) const {
    auto inside = [](double v) { return v >= kLambdaFloor && v <= kLambdaCeil; };
    if (m.c != 1.0) {
      if (!inside(lam_min_) || !inside(lam_max_) || !inside(lam_min_ * m.c) || !inside(lam_max_ * m.c)) return true;
    }
    if (m.j >= 0) {
      const double cur = lambda_(m.j) * m.c;
      if (!inside(lambda_(m.j)) || !inside(cur) || !inside(cur * m.r)) return true;
    }
    return false;
  }

  // Full recomputation for moves that change lambda non-multiplicatively.
  double full_loglik(const VectorXd& lambda, double tau) const {
    const VectorXd s = tau * lambda.unaryExpr(&clamp_lambda);
    const auto [q, ld] = qf_.peek_full(b_, s);
    return -ld - q * 0.5 / (sigma_ * sigma_);
  }

  void commit_full(const VectorXd& lambda, double tau) {
    lambda_ = lambda;
    tau_ = tau;
    qf_.reset(b_, current_s());
    lam_min_ = lambda_.minCoeff();
    lam_max_ = lambda_.maxCoeff();
  }

  template <class F>
  double slice_log(F&& logf, double value, double hi = kLogHi) {
    const double u = detail::slice_sample(logf, std::log(value), kSliceWidth, rng_, kLogLo, hi);
    return std::exp(u);
  }

  void update_scales() {
    std::visit([this](auto& l) { update_latent(l); }, latent_);
  }

  void update_latent(HorseshoeLatent& l) {
    const auto& h = std::get<HorseshoeHyper>(prior_.hyper);
    for (Index j = 0; j < p_; ++j) {
      const double cur = l.lambda(j);
      auto f = [&](double u) {
        const double v = std::exp(u);
        return dist::half_cauchy_lpdf(v, 1.0) + u + move_loglik(Move{1.0, j, v / cur, 1.0});
      };
      const double v = slice_log(f, cur);
      commit_move(Move{1.0, j, v / cur, 1.0});
      l.lambda(j) = v;
    }
    const double cur = l.tau;
    auto f = [&](double u) {
      const double v = std::exp(u);
      return dist::half_cauchy_lpdf(v, h.tau_scale) + u + move_loglik(Move{1.0, -1, 1.0, v / cur});
    };
    const double v = slice_log(f, cur);
    commit_move(Move{1.0, -1, 1.0, v / cur});
    l.tau = v;
  }

  void update_latent(RegularizedHorseshoeLatent& l) {
    const auto& h = std::get<RegularizedHorseshoeHyper>(prior_.hyper);
    auto tilde = [](double lam, double tau, double c2) {
      const double l2 = lam * lam;
      return std::sqrt(c2 * l2 / (c2 + tau * tau * l2));
    };
    for (Index j = 0; j < p_; ++j) {
      const double cur = tilde(l.lambda(j), l.tau, l.slab2);
      auto f = [&](double u) {
        const double v = std::exp(u);
        return dist::half_cauchy_lpdf(v, 1.0) + u + move_loglik(Move{1.0, j, tilde(v, l.tau, l.slab2) / cur, 1.0});
      };
      const double v = slice_log(f, l.lambda(j));
      commit_move(Move{1.0, j, tilde(v, l.tau, l.slab2) / cur, 1.0});
      l.lambda(j) = v;
    }
    auto assembled = [&](double tau, double c2) {
      VectorXd lam(p_);
      for (Index j = 0; j < p_; ++j) lam(j) = tilde(l.lambda(j), tau, c2);
      return lam;
    };
    {
      auto f = [&](double u) {
        const double v = std::exp(u);
        return dist::half_cauchy_lpdf(v, h.tau0) + u + full_loglik(assembled(v, l.slab2), v);
      };
      l.tau = slice_log(f, l.tau);
      commit_full(assembled(l.tau, l.slab2), l.tau);
    }
    {
      auto f = [&](double u) {
        const double v = std::exp(u);
        return dist::inv_gamma_lpdf(v, h.slab_shape, h.slab_scale) + u + full_loglik(assembled(l.tau, v), l.tau);
      };
      l.slab2 = slice_log(f, l.slab2);
      commit_full(assembled(l.tau, l.slab2), l.tau);
    }
  }

  // Dirichlet weights carried as Gamma(a, 1) variables g, phi = g / sum(g).
  // Changing g_j rescales every phi by G / G' and phi_j additionally by g_j' / g_j.
  // `power` is 1 when lambda is linear in phi (DL) and 1/2 when lambda^2 is (R2D2).
  void update_weights(VectorXd& g, double a_pi, double power) {
    double total = g.sum();
    for (Index j = 0; j < p_; ++j) {
      const double cur = g(j);
      auto move_for = [&](double v) {
        const double new_total = total - cur + v;
        return Move{std::pow(total / new_total, power), j, std::pow(v / cur, power), 1.0};
      };
      auto f = [&](double u) {
        const double v = std::exp(u);
        return dist::gamma_lpdf(v, a_pi, 1.0) + u + move_loglik(move_for(v));
      };
      const double v = slice_log(f, cur);
      commit_move(move_for(v));
      g(j) = v;
      total = g.sum();
    }
  }

  void update_latent(DirichletLaplaceLatent& l) {
    const auto& h = std::get<DirichletLaplaceHyper>(prior_.hyper);
    for (Index j = 0; j < p_; ++j) {
      const double cur = l.psi(j);
      auto f = [&](double u) {
        const double v = std::exp(u);
        return dist::exponential_lpdf(v, 0.5) + u + move_loglik(Move{1.0, j, std::sqrt(v / cur), 1.0});
      };
      const double v = slice_log(f, cur);
      commit_move(Move{1.0, j, std::sqrt(v / cur), 1.0});
      l.psi(j) = v;
    }
    update_weights(l.weights, h.a_pi, 1.0);
    const double cur = l.tau;
    auto f = [&](double u) {
      const double v = std::exp(u);
      return dist::gamma_lpdf(v, h.tau_shape, h.tau_rate) + u + move_loglik(Move{1.0, -1, 1.0, v / cur});
    };
    const double v = slice_log(f, cur);
    commit_move(Move{1.0, -1, 1.0, v / cur});
    l.tau = v;
  }

  void update_latent(R2D2Latent& l) {
    const auto& h = std::get<R2D2Hyper>(prior_.hyper);
    update_weights(l.weights, h.a_pi, 0.5);
    const double cur = l.omega2;
    auto f = [&](double u) {
      const double v = std::exp(u);
      return dist::beta_prime_lpdf(v, h.a1, h.a2) + u + move_loglik(Move{std::sqrt(v / cur), -1, 1.0, 1.0});
    };
    const double v = slice_log(f, cur);
    commit_move(Move{std::sqrt(v / cur), -1, 1.0, 1.0});
    l.omega2 = v;
  }

  void update_latent(BetaPrimeLatent& l) {
    const auto& h = std::get<BetaPrimeHyper>(prior_.hyper);
    for (Index j = 0; j < p_; ++j) {
      const double cur = l.lambda2(j);
      auto f = [&](double u) {
        const double v = std::exp(u);
        return dist::beta_prime_lpdf(v, l.alpha, h.beta) + u + move_loglik(Move{1.0, j, std::sqrt(v / cur), 1.0});
      };
      const double v = slice_log(f, cur);
      commit_move(Move{1.0, j, std::sqrt(v / cur), 1.0});
      l.lambda2(j) = v;
    }
    auto f = [&](double u) {
      const double a = std::exp(u);
      if (a > h.alpha_max) return -std::numeric_limits<double>::infinity();
      double lp = dist::gamma_lpdf(a, h.alpha_shape, h.alpha_rate) + u;
      for (Index j = 0; j < p_; ++j) lp += dist::beta_prime_lpdf(l.lambda2(j), a, h.beta);
      return lp;
    };
    l.alpha = slice_log(f, l.alpha, std::log(h.alpha_max));
  }

  void update_latent(NormalGammaLatent& l) {
    const auto& h = std::get<NormalGammaHyper>(prior_.hyper);
    for (Index j = 0; j < p_; ++j) {
      const double cur = l.psi2(j);
      auto f = [&](double u) {
        const double v = std::exp(u);
        return dist::gamma_lpdf(v, l.shape, l.shape / l.nu) + u +
               move_loglik(Move{1.0, j, std::sqrt(v / cur), 1.0});
      };
      const double v = slice_log(f, cur);
      commit_move(Move{1.0, j, std::sqrt(v / cur), 1.0});
      l.psi2(j) = v;
    }
    auto layer = [&](double shape, double nu) {
      double lp = 0.0;
      for (Index j = 0; j < p_; ++j) lp += dist::gamma_lpdf(l.psi2(j), shape, shape / nu);
      return lp;
    };
    auto f_nu = [&](double u) {
      const double v = std::exp(u);
      return dist::inv_gamma_lpdf(v, h.nu_shape, h.m) + u + layer(l.shape, v);
    };
    l.nu = slice_log(f_nu, l.nu);
    auto f_shape = [&](double u) {
      const double v = std::exp(u);
      return dist::exponential_lpdf(v, h.shape_rate) + u + layer(v, l.nu);
    };
    l.shape = slice_log(f_shape, l.shape);
  }

  void store(ChainDraws& out, Index d) const {
    out.b.row(d) = b_.transpose();
    out.lambda.row(d) = lambda_.unaryExpr(&clamp_lambda).transpose();
    out.tau(d) = tau_;
    out.sigma(d) = sigma_;
    out.intercept(d) = alpha_;
    const VectorXd resid = (data_.y - data_.x * b_).array() - alpha_;
    const double c = -0.5 * std::log(2.0 * std::numbers::pi) - std::log(sigma_);
    out.log_lik.row(d) = (c - 0.5 * (resid.array() / sigma_).square()).matrix().transpose();
  }

  const RegressionDataset& data_;
  const PriorSpec& prior_;
  const MatrixXd* oinv_;
  const McmcConfig& cfg_;
  Rng rng_;
  QuadForm qf_;
  Index n_, p_;
  MatrixXd xtx_;
  VectorXd xty_, xsum_;

  Latent latent_;
  VectorXd lambda_;
  double tau_ = 1.0;
  double sigma_ = 1.0;
  double alpha_ = 0.0;
  VectorXd b_;
  double sigma_step_ = 0.5;
  bool clamp_active_ = false;
  double lam_min_ = 1.0;
  double lam_max_ = 1.0;
};

void check_config(const McmcConfig& c, const RegressionDataset& data) {
  if (c.chains < 1 || c.warmup < 0 || c.draws < 1 || c.thin < 1) {
    throw Error(ErrorKind::InvalidParameter, "chains, draws and thin must be positive; warmup nonnegative");
  }
  if (data.n() < 2) throw Error(ErrorKind::InvalidParameter, "need at least 2 observations");
  if (data.y.size() != data.n()) throw Error(ErrorKind::InvalidParameter, "X and y row counts differ");
  if (!data.x.allFinite() || !data.y.allFinite()) throw Error(ErrorKind::InvalidParameter, "non-finite data");
  if (c.fixed_scales) {
    const auto& f = *c.fixed_scales;
    if (!(f.tau > 0.0) || !(f.sigma > 0.0) || !(f.lambda.array() > 0.0).all()) {
      throw Error(ErrorKind::InvalidParameter, "fixed scales must be positive");
    }
  }
}

}  // namespace

MatrixXd PosteriorDraws::stacked_b() const {
  MatrixXd out(total_draws(), p());
  for (int c = 0; c < n_chains(); ++c) out.middleRows(c * n_draws(), n_draws()) = chains[c].b;
  return out;
}

VectorXd PosteriorDraws::stacked_intercept() const {
  VectorXd out(total_draws());
  for (int c = 0; c < n_chains(); ++c) out.segment(c * n_draws(), n_draws()) = chains[c].intercept;
  return out;
}

VectorXd PosteriorDraws::stacked_sigma() const {
  VectorXd out(total_draws());
  for (int c = 0; c < n_chains(); ++c) out.segment(c * n_draws(), n_draws()) = chains[c].sigma;
  return out;
}

MatrixXd PosteriorDraws::stacked_log_lik() const {
  if (chains.empty()) return {};
  MatrixXd out(total_draws(), chains.front().log_lik.cols());
  for (int c = 0; c < n_chains(); ++c) out.middleRows(c * n_draws(), n_draws()) = chains[c].log_lik;
  return out;
}

MatrixXd PosteriorDraws::b_by_chain(Index j) const {
  MatrixXd out(n_chains(), n_draws());
  for (int c = 0; c < n_chains(); ++c) out.row(c) = chains[c].b.col(j).transpose();
  return out;
}

MatrixXd PosteriorDraws::sigma_by_chain() const {
  MatrixXd out(n_chains(), n_draws());
  for (int c = 0; c < n_chains(); ++c) out.row(c) = chains[c].sigma.transpose();
  return out;
}

MatrixXd PosteriorDraws::tau_by_chain() const {
  MatrixXd out(n_chains(), n_draws());
  for (int c = 0; c < n_chains(); ++c) out.row(c) = chains[c].tau.transpose();
  return out;
}

PosteriorDraws fit_with_omega(const RegressionDataset& data, const PriorSpec& prior, const CorrelationMatrix& omega,
                              const McmcConfig& config) {
  check_config(config, data);
  if (omega.dim() != data.p()) throw Error(ErrorKind::InvalidParameter, "Omega dimension differs from p");
  MatrixXd omega_inv;
  const MatrixXd* oinv = nullptr;
  if (!omega.is_identity()) {
    omega_inv = linalg::spd_inverse(omega.matrix(), ErrorKind::NumericalSingularity, "Omega inverse");
    oinv = &omega_inv;
  }
  PosteriorDraws out;
  out.chains.resize(std::size_t(config.chains));
  parallel_for(config.chains, config.jobs, [&](long c) {
    ChainRunner runner(data, prior, oinv, config, std::uint64_t(c));
    out.chains[std::size_t(c)] = runner.run();
  });
  long clamp_hits = 0;
  for (const auto& ch : out.chains) clamp_hits += ch.clamp_hits;
  out.manifest = {{"prior", to_json(prior)},
                  {"mcmc", to_json(config)},
                  {"n", data.n()},
                  {"p", data.p()},
                  {"omega_is_identity", omega.is_identity()},
                  {"lambda_clamp", {{"floor", kLambdaFloor}, {"ceil", kLambdaCeil}, {"iterations_hit", clamp_hits}}}};
  return out;
}

PosteriorDraws fit(const RegressionDataset& data, const PriorSpec& prior, const OmegaSpec& omega,
                   const McmcConfig& config) {
  const CorrelationMatrix om = build_omega(data.x, omega);
  PosteriorDraws out = fit_with_omega(data, prior, om, config);
  out.manifest["omega_mode"] = omega_mode_name(omega);
  out.manifest["omega_center"] = omega.center;
  return out;
}

nlohmann::json to_json(const McmcConfig& c) {
  nlohmann::json j = {{"chains", c.chains}, {"warmup", c.warmup}, {"draws", c.draws},
                      {"seed", c.seed},     {"thin", c.thin},     {"fit_intercept", c.fit_intercept}};
  if (c.fixed_scales) {
    const auto& f = *c.fixed_scales;
    j["fixed_scales"] = {{"lambda", std::vector<double>(f.lambda.data(), f.lambda.data() + f.lambda.size())},
                         {"tau", f.tau},
                         {"sigma", f.sigma}};
  }
  return j;
}

}  // namespace dasp
