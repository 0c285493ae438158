#include "dasp/priors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "dasp/distributions.hpp"
#include "dasp/error.hpp"

namespace dasp {

namespace {

// Draws are assembled in log space; the floor keeps them strictly positive.
constexpr double kMinLog = -700.0;

double from_log(double lg) { return std::exp(std::clamp(lg, kMinLog, -kMinLog)); }

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double sample_sd(const Eigen::VectorXd& y) {
  if (y.size() < 2) return 1.0;
  const double mean = y.mean();
  const double var = (y.array() - mean).square().sum() / double(y.size() - 1);
  return var > 0.0 ? std::sqrt(var) : 1.0;
}

class OverrideReader {
 public:
  explicit OverrideReader(const PriorOverrides& o) : o_(o) {}

  void read(const std::string& key, double& target) {
    if (auto it = o_.find(key); it != o_.end()) {
      target = it->second;
      used_.push_back(key);
    }
  }
  bool has(const std::string& key) const { return o_.count(key) > 0; }

  void finish() const {
    for (const auto& [key, value] : o_) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
        throw Error(ErrorKind::InvalidParameter, "unknown prior hyperparameter '" + key + "'");
      }
    }
  }

 private:
  const PriorOverrides& o_;
  std::vector<std::string> used_;
};

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorKind::InvalidParameter, std::string(name) + " must be positive and finite");
  }
}

double support_check(double lp) {
  if (!std::isfinite(lp)) throw Error(ErrorKind::OutOfSupport, "draw outside prior support");
  return lp;
}

}  // namespace

PriorSpec default_spec(PriorKind kind, const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                       const PriorOverrides& overrides) {
  const double n = double(x.rows());
  const double p = double(x.cols());
  OverrideReader reader(overrides);
  PriorSpec spec;
  spec.sigma_prior.eta = sample_sd(y);
  reader.read("sigma.nu", spec.sigma_prior.nu);
  reader.read("sigma.eta", spec.sigma_prior.eta);
  require_positive(spec.sigma_prior.nu, "sigma.nu");
  require_positive(spec.sigma_prior.eta, "sigma.eta");

  switch (kind) {
    case PriorKind::BP: {
      BetaPrimeHyper h;
      reader.read("alpha_shape", h.alpha_shape);
      reader.read("alpha_rate", h.alpha_rate);
      reader.read("alpha_max", h.alpha_max);
      reader.read("beta", h.beta);
      require_positive(h.alpha_shape, "alpha_shape");
      require_positive(h.alpha_rate, "alpha_rate");
      require_positive(h.alpha_max, "alpha_max");
      require_positive(h.beta, "beta");
      spec.hyper = h;
      break;
    }
    case PriorKind::DL: {
      DirichletLaplaceHyper h;
      reader.read("a_pi", h.a_pi);
      h.tau_shape = n * h.a_pi;
      reader.read("tau_shape", h.tau_shape);
      reader.read("tau_rate", h.tau_rate);
      require_positive(h.a_pi, "a_pi");
      require_positive(h.tau_shape, "tau_shape");
      require_positive(h.tau_rate, "tau_rate");
      spec.hyper = h;
      break;
    }
    case PriorKind::HS: {
      HorseshoeHyper h;
      reader.read("tau_scale", h.tau_scale);
      require_positive(h.tau_scale, "tau_scale");
      spec.hyper = h;
      break;
    }
    case PriorKind::RHS: {
      RegularizedHorseshoeHyper h;
      h.p0 = std::max(1.0, p / 10.0);
      reader.read("p0", h.p0);
      h.tau0 = h.p0 / (std::max(p - h.p0, 1.0) * std::sqrt(n));
      reader.read("tau0", h.tau0);
      reader.read("slab_shape", h.slab_shape);
      reader.read("slab_scale", h.slab_scale);
      require_positive(h.p0, "p0");
      require_positive(h.tau0, "tau0");
      require_positive(h.slab_shape, "slab_shape");
      require_positive(h.slab_scale, "slab_scale");
      spec.hyper = h;
      break;
    }
    case PriorKind::NG: {
      NormalGammaHyper h;
      if (!reader.has("M")) {
        const Eigen::VectorXd b_hat = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(x).solve(y);
        h.m = b_hat.squaredNorm() / p;
        if (!(h.m > 0.0)) h.m = 1.0;
      }
      reader.read("M", h.m);
      reader.read("nu_shape", h.nu_shape);
      reader.read("shape_rate", h.shape_rate);
      require_positive(h.m, "M");
      require_positive(h.nu_shape, "nu_shape");
      require_positive(h.shape_rate, "shape_rate");
      spec.hyper = h;
      break;
    }
    case PriorKind::R2D2: {
      R2D2Hyper h;
      reader.read("a_pi", h.a_pi);
      h.a1 = p * h.a_pi;
      reader.read("a1", h.a1);
      reader.read("a2", h.a2);
      require_positive(h.a_pi, "a_pi");
      require_positive(h.a1, "a1");
      require_positive(h.a2, "a2");
      spec.hyper = h;
      break;
    }
  }
  reader.finish();
  return spec;
}

PriorSpec normal_means_spec(PriorKind kind, Eigen::Index p, const PriorOverrides& overrides) {
  if (p < 1) throw Error(ErrorKind::InvalidParameter, "normal_means_spec: p must be positive");
  return default_spec(kind, Eigen::MatrixXd::Identity(p, p), Eigen::VectorXd::Zero(p), overrides);
}

Eigen::VectorXd simplex(const Eigen::VectorXd& weights) { return weights / weights.sum(); }

Eigen::VectorXd local_scales(const PriorSpec& spec, const Latent& latent) {
  return std::visit(
      Overloaded{
          [](const BetaPrimeLatent& l) -> Eigen::VectorXd { return l.lambda2.array().sqrt(); },
          [](const DirichletLaplaceLatent& l) -> Eigen::VectorXd {
            return l.psi.array().sqrt() * simplex(l.weights).array();
          },
          [](const HorseshoeLatent& l) -> Eigen::VectorXd { return l.lambda; },
          [](const RegularizedHorseshoeLatent& l) -> Eigen::VectorXd {
            const Eigen::ArrayXd lam2 = l.lambda.array().square();
            return (l.slab2 * lam2 / (l.slab2 + l.tau * l.tau * lam2)).sqrt();
          },
          [](const NormalGammaLatent& l) -> Eigen::VectorXd { return l.psi2.array().sqrt(); },
          [](const R2D2Latent& l) -> Eigen::VectorXd {
            return (simplex(l.weights).array() * l.omega2).sqrt();
          },
      },
      latent);
  (void)spec;
}

double global_scale(const Latent& latent) {
  return std::visit(Overloaded{
                        [](const DirichletLaplaceLatent& l) { return l.tau; },
                        [](const HorseshoeLatent& l) { return l.tau; },
                        [](const RegularizedHorseshoeLatent& l) { return l.tau; },
                        [](const auto&) { return 1.0; },
                    },
                    latent);
}

ScaleDraw assemble(const PriorSpec& spec, Latent latent) {
  ScaleDraw d;
  d.lambda = local_scales(spec, latent);
  d.tau = global_scale(latent);
  d.latent = std::move(latent);
  return d;
}

ScaleDraw sample_scales(const PriorSpec& spec, Eigen::Index p, Rng& rng) {
  if (p < 1) throw Error(ErrorKind::InvalidParameter, "sample_scales: p must be >= 1");
  Latent latent = std::visit(
      Overloaded{
          [&](const BetaPrimeHyper& h) -> Latent {
            BetaPrimeLatent l;
            do {
              l.alpha = rng.gamma(h.alpha_shape, h.alpha_rate);
            } while (!(l.alpha > 0.0 && l.alpha <= h.alpha_max));
            l.lambda2.resize(p);
            for (Eigen::Index j = 0; j < p; ++j) {
              l.lambda2[j] = from_log(rng.log_gamma_variate(l.alpha) - rng.log_gamma_variate(h.beta));
            }
            return l;
          },
          [&](const DirichletLaplaceHyper& h) -> Latent {
            DirichletLaplaceLatent l;
            l.psi.resize(p);
            Eigen::VectorXd lg(p);
            for (Eigen::Index j = 0; j < p; ++j) {
              l.psi[j] = rng.exponential(0.5);
              lg[j] = rng.log_gamma_variate(h.a_pi);
            }
            // keep the weights representable: shift by the max before exponentiating
            l.weights = (lg.array() - lg.maxCoeff()).exp();
            l.weights = l.weights.cwiseMax(std::exp(kMinLog));
            l.tau = rng.gamma(h.tau_shape, h.tau_rate);
            return l;
          },
          [&](const HorseshoeHyper& h) -> Latent {
            HorseshoeLatent l;
            l.lambda.resize(p);
            for (Eigen::Index j = 0; j < p; ++j) l.lambda[j] = rng.half_cauchy(1.0);
            l.tau = rng.half_cauchy(h.tau_scale);
            return l;
          },
          [&](const RegularizedHorseshoeHyper& h) -> Latent {
            RegularizedHorseshoeLatent l;
            l.lambda.resize(p);
            for (Eigen::Index j = 0; j < p; ++j) l.lambda[j] = rng.half_cauchy(1.0);
            l.tau = rng.half_cauchy(h.tau0);
            l.slab2 = 1.0 / rng.gamma(h.slab_shape, h.slab_scale);
            return l;
          },
          [&](const NormalGammaHyper& h) -> Latent {
            NormalGammaLatent l;
            l.shape = rng.exponential(h.shape_rate);
            l.nu = 1.0 / rng.gamma(h.nu_shape, h.m);
            l.psi2.resize(p);
            const double log_rate = std::log(l.shape / l.nu);
            for (Eigen::Index j = 0; j < p; ++j) {
              l.psi2[j] = from_log(rng.log_gamma_variate(l.shape) - log_rate);
            }
            return l;
          },
          [&](const R2D2Hyper& h) -> Latent {
            R2D2Latent l;
            Eigen::VectorXd lg(p);
            for (Eigen::Index j = 0; j < p; ++j) lg[j] = rng.log_gamma_variate(h.a_pi);
            l.weights = (lg.array() - lg.maxCoeff()).exp();
            l.weights = l.weights.cwiseMax(std::exp(kMinLog));
            l.omega2 = from_log(rng.log_gamma_variate(h.a1) - rng.log_gamma_variate(h.a2));
            return l;
          },
      },
      spec.hyper);
  ScaleDraw draw = assemble(spec, std::move(latent));
  // Assembled scales can still underflow for extreme simplex weights.
  draw.lambda = draw.lambda.cwiseMax(std::exp(kMinLog / 2.0));
  return draw;
}

double log_prior_density(const PriorSpec& spec, const ScaleDraw& draw, double sigma) {
  if (!(draw.lambda.array() > 0.0).all() || !(draw.tau > 0.0)) {
    throw Error(ErrorKind::OutOfSupport, "local and global scales must be positive");
  }
  if (spec.kind() != static_cast<PriorKind>(draw.latent.index())) {
    throw Error(ErrorKind::InvalidParameter, "log_prior_density: latent kind does not match spec");
  }
  double lp = support_check(dist::half_student_t_lpdf(sigma, spec.sigma_prior.nu, spec.sigma_prior.eta));

  auto sum_over = [](const Eigen::VectorXd& v, auto&& f) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < v.size(); ++j) acc += support_check(f(v[j]));
    return acc;
  };

  lp += std::visit(
      Overloaded{
          [&](const BetaPrimeLatent& l) {
            const auto& h = std::get<BetaPrimeHyper>(spec.hyper);
            if (!(l.alpha > 0.0 && l.alpha <= h.alpha_max)) {
              throw Error(ErrorKind::OutOfSupport, "BP alpha outside (0, alpha_max]");
            }
            return support_check(dist::gamma_lpdf(l.alpha, h.alpha_shape, h.alpha_rate)) +
                   sum_over(l.lambda2, [&](double v) { return dist::beta_prime_lpdf(v, l.alpha, h.beta); });
          },
          [&](const DirichletLaplaceLatent& l) {
            const auto& h = std::get<DirichletLaplaceHyper>(spec.hyper);
            return sum_over(l.psi, [](double v) { return dist::exponential_lpdf(v, 0.5); }) +
                   sum_over(l.weights, [&](double v) { return dist::gamma_lpdf(v, h.a_pi, 1.0); }) +
                   support_check(dist::gamma_lpdf(l.tau, h.tau_shape, h.tau_rate));
          },
          [&](const HorseshoeLatent& l) {
            const auto& h = std::get<HorseshoeHyper>(spec.hyper);
            return sum_over(l.lambda, [](double v) { return dist::half_cauchy_lpdf(v, 1.0); }) +
                   support_check(dist::half_cauchy_lpdf(l.tau, h.tau_scale));
          },
          [&](const RegularizedHorseshoeLatent& l) {
            const auto& h = std::get<RegularizedHorseshoeHyper>(spec.hyper);
            return sum_over(l.lambda, [](double v) { return dist::half_cauchy_lpdf(v, 1.0); }) +
                   support_check(dist::half_cauchy_lpdf(l.tau, h.tau0)) +
                   support_check(dist::inv_gamma_lpdf(l.slab2, h.slab_shape, h.slab_scale));
          },
          [&](const NormalGammaLatent& l) {
            const auto& h = std::get<NormalGammaHyper>(spec.hyper);
            return support_check(dist::exponential_lpdf(l.shape, h.shape_rate)) +
                   support_check(dist::inv_gamma_lpdf(l.nu, h.nu_shape, h.m)) +
                   sum_over(l.psi2, [&](double v) { return dist::gamma_lpdf(v, l.shape, l.shape / l.nu); });
          },
          [&](const R2D2Latent& l) {
            const auto& h = std::get<R2D2Hyper>(spec.hyper);
            return sum_over(l.weights, [&](double v) { return dist::gamma_lpdf(v, h.a_pi, 1.0); }) +
                   support_check(dist::beta_prime_lpdf(l.omega2, h.a1, h.a2));
          },
      },
      draw.latent);
  return lp;
}

PriorKind parse_prior_kind(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "bp") return PriorKind::BP;
  if (s == "dl") return PriorKind::DL;
  if (s == "hs") return PriorKind::HS;
  if (s == "rhs") return PriorKind::RHS;
  if (s == "ng") return PriorKind::NG;
  if (s == "r2d2" || s == "d2") return PriorKind::R2D2;
  throw Error(ErrorKind::InvalidParameter, "unknown prior '" + s + "'");
}

std::string to_string(PriorKind kind) {
  switch (kind) {
    case PriorKind::BP: return "bp";
    case PriorKind::DL: return "dl";
    case PriorKind::HS: return "hs";
    case PriorKind::RHS: return "rhs";
    case PriorKind::NG: return "ng";
    case PriorKind::R2D2: return "r2d2";
  }
  return "unknown";
}

nlohmann::json to_json(const PriorSpec& spec) {
  nlohmann::json j;
  j["kind"] = to_string(spec.kind());
  j["sigma"] = {{"nu", spec.sigma_prior.nu}, {"eta", spec.sigma_prior.eta}};
  j["hyper"] = std::visit(
      Overloaded{
          [](const BetaPrimeHyper& h) {
            return nlohmann::json{{"alpha_shape", h.alpha_shape}, {"alpha_rate", h.alpha_rate},
                                  {"alpha_max", h.alpha_max}, {"beta", h.beta}};
          },
          [](const DirichletLaplaceHyper& h) {
            return nlohmann::json{{"a_pi", h.a_pi}, {"tau_shape", h.tau_shape}, {"tau_rate", h.tau_rate}};
          },
          [](const HorseshoeHyper& h) { return nlohmann::json{{"tau_scale", h.tau_scale}}; },
          [](const RegularizedHorseshoeHyper& h) {
            return nlohmann::json{{"p0", h.p0}, {"tau0", h.tau0}, {"slab_shape", h.slab_shape},
                                  {"slab_scale", h.slab_scale}};
          },
          [](const NormalGammaHyper& h) {
            return nlohmann::json{{"M", h.m}, {"nu_shape", h.nu_shape}, {"shape_rate", h.shape_rate}};
          },
          [](const R2D2Hyper& h) {
            return nlohmann::json{{"a_pi", h.a_pi}, {"a1", h.a1}, {"a2", h.a2}};
          },
      },
      spec.hyper);
  return j;
}

}  // namespace dasp
