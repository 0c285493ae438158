#include "dasp/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace dasp::dist {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kHalfLog2Pi = 0.91893853320467274178;

double lgam(double x) { return boost::math::lgamma(x); }
}  // namespace

double normal_lpdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return -kHalfLog2Pi - std::log(sd) - 0.5 * z * z;
}

double half_cauchy_lpdf(double x, double scale) {
  if (!(x > 0.0) || !std::isfinite(x)) return kNegInf;
  const double z = x / scale;
  return std::log(2.0 / std::numbers::pi) - std::log(scale) - std::log1p(z * z);
}

double half_student_t_lpdf(double x, double nu, double scale) {
  if (!(x > 0.0) || !std::isfinite(x)) return kNegInf;
  const double z = x / scale;
  return std::log(2.0) + lgam(0.5 * (nu + 1.0)) - lgam(0.5 * nu) -
         0.5 * std::log(nu * std::numbers::pi) - std::log(scale) -
         0.5 * (nu + 1.0) * std::log1p(z * z / nu);
}

double gamma_lpdf(double x, double shape, double rate) {
  if (!(x > 0.0) || !std::isfinite(x)) return kNegInf;
  return shape * std::log(rate) - lgam(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

double inv_gamma_lpdf(double x, double shape, double scale) {
  if (!(x > 0.0) || !std::isfinite(x)) return kNegInf;
  return shape * std::log(scale) - lgam(shape) - (shape + 1.0) * std::log(x) - scale / x;
}

double exponential_lpdf(double x, double rate) {
  if (!(x > 0.0) || !std::isfinite(x)) return kNegInf;
  return std::log(rate) - rate * x;
}

double beta_prime_lpdf(double x, double a, double b) {
  if (!(x > 0.0) || !std::isfinite(x)) return kNegInf;
  const double log_beta = lgam(a) + lgam(b) - lgam(a + b);
  return (a - 1.0) * std::log(x) - (a + b) * std::log1p(x) - log_beta;
}

double log_sum_exp(const double* values, long n) {
  if (n <= 0) return kNegInf;
  const double m = *std::max_element(values, values + n);
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (long i = 0; i < n; ++i) acc += std::exp(values[i] - m);
  return m + std::log(acc);
}

}  // namespace dasp::dist
