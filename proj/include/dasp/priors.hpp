#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>

#include <Eigen/Dense>
#include <json.hpp>

#include "dasp/rng.hpp"

namespace dasp {

// Order matches the alternatives of PriorHyper and Latent.
enum class PriorKind { BP, DL, HS, RHS, NG, R2D2 };

/// lambda_j^2 ~ BetaPrime(alpha, beta); alpha ~ Gamma(shape, rate) truncated to (0, alpha_max].
struct BetaPrimeHyper {
  double alpha_shape = 1.0;
  double alpha_rate = 2.0;
  double alpha_max = 0.5;
  double beta = 1.0;
};

/// psi_j ~ Exp(1/2), phi ~ Dirichlet(a_pi), tau ~ Gamma(tau_shape, tau_rate), tau_shape = n a_pi.
struct DirichletLaplaceHyper {
  double a_pi = 0.5;
  double tau_shape = 1.0;
  double tau_rate = 0.5;
};

/// lambda_j, tau ~ C+(0, 1).
struct HorseshoeHyper {
  double tau_scale = 1.0;
};

/// Regularized horseshoe: lambda_j ~ C+(0, 1), tau ~ C+(0, tau0),
/// c^2 ~ InvGamma(slab_shape, slab_scale), effective scale
/// lambda~_j^2 = c^2 lambda_j^2 / (c^2 + tau^2 lambda_j^2).
struct RegularizedHorseshoeHyper {
  double p0 = 1.0;
  double tau0 = 1.0;
  double slab_shape = 2.0;
  double slab_scale = 8.0;
};

/// psi_j^2 ~ Gamma(shape, rate = shape / nu), nu ~ InvGamma(nu_shape, m), shape ~ Exp(shape_rate).
struct NormalGammaHyper {
  double m = 1.0;
  double nu_shape = 2.0;
  double shape_rate = 1.0;
};

/// lambda_j^2 = phi_j omega^2, phi ~ Dirichlet(a_pi), omega^2 ~ BetaPrime(a1, a2).
struct R2D2Hyper {
  double a_pi = 0.25;
  double a1 = 1.0;
  double a2 = 0.5;
};

using PriorHyper = std::variant<BetaPrimeHyper, DirichletLaplaceHyper, HorseshoeHyper,
                                RegularizedHorseshoeHyper, NormalGammaHyper, R2D2Hyper>;

/// Half Student-t(nu, eta) prior on the residual scale.
struct HalfStudentT {
  double nu = 3.0;
  double eta = 1.0;
};

struct PriorSpec {
  PriorHyper hyper = HorseshoeHyper{};
  HalfStudentT sigma_prior;

  PriorKind kind() const { return static_cast<PriorKind>(hyper.index()); }
};

// Kind-specific latent layers. Simplex weights are carried as independent
// Gamma(a_pi, 1) variables g_j with phi = g / sum(g).
struct BetaPrimeLatent {
  Eigen::VectorXd lambda2;
  double alpha = 0.25;
};
struct DirichletLaplaceLatent {
  Eigen::VectorXd psi;
  Eigen::VectorXd weights;
  double tau = 1.0;
};
struct HorseshoeLatent {
  Eigen::VectorXd lambda;
  double tau = 1.0;
};
struct RegularizedHorseshoeLatent {
  Eigen::VectorXd lambda;
  double tau = 1.0;
  double slab2 = 1.0;
};
struct NormalGammaLatent {
  Eigen::VectorXd psi2;
  double nu = 1.0;
  double shape = 1.0;
};
struct R2D2Latent {
  Eigen::VectorXd weights;
  double omega2 = 1.0;
};

using Latent = std::variant<BetaPrimeLatent, DirichletLaplaceLatent, HorseshoeLatent,
                            RegularizedHorseshoeLatent, NormalGammaLatent, R2D2Latent>;

/// A full draw of the scale layers plus the assembled (lambda, tau) that
/// enter b | sigma, tau, lambda ~ N(0, sigma^2 tau^2 D Omega D).
/// Kinds without a separate global scale (BP, NG, R2D2) report tau = 1.
struct ScaleDraw {
  Latent latent;
  Eigen::VectorXd lambda;
  double tau = 1.0;
};

using PriorOverrides = std::map<std::string, double>;

/// Defaults per kind, with eta = sd(y). Overrides are applied before derived
/// quantities (DL tau shape, R2D2 a1, RHS tau0) unless those are overridden
/// themselves.
PriorSpec default_spec(PriorKind kind, const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                       const PriorOverrides& overrides = {});

/// Defaults for the normal-means design X = I_p with no data (eta = 1,
/// NG M = 1), used for prior-only analytics.
PriorSpec normal_means_spec(PriorKind kind, Eigen::Index p, const PriorOverrides& overrides = {});

Eigen::VectorXd local_scales(const PriorSpec& spec, const Latent& latent);
double global_scale(const Latent& latent);
ScaleDraw assemble(const PriorSpec& spec, Latent latent);

/// Simplex weights phi for the Dirichlet kinds.
Eigen::VectorXd simplex(const Eigen::VectorXd& weights);

ScaleDraw sample_scales(const PriorSpec& spec, Eigen::Index p, Rng& rng);

/// Sum of the log densities of every latent layer and of sigma.
/// Throws OutOfSupport when any layer is outside its support.
double log_prior_density(const PriorSpec& spec, const ScaleDraw& draw, double sigma);

PriorKind parse_prior_kind(std::string_view name);
std::string to_string(PriorKind kind);
nlohmann::json to_json(const PriorSpec& spec);

}  // namespace dasp
