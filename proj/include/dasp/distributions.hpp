#pragma once

// Normalized log densities on the natural scale. Arguments outside the
// support return -infinity; callers decide whether that is an error.

namespace dasp::dist {

double normal_lpdf(double x, double mean, double sd);
double half_cauchy_lpdf(double x, double scale);
double half_student_t_lpdf(double x, double nu, double scale);
/// Gamma with shape/rate parameterization.
double gamma_lpdf(double x, double shape, double rate);
/// Inverse-Gamma with shape/scale parameterization.
double inv_gamma_lpdf(double x, double shape, double scale);
double exponential_lpdf(double x, double rate);
/// Beta-prime density proportional to x^(a-1) (1+x)^(-a-b).
double beta_prime_lpdf(double x, double a, double b);

double log_sum_exp(const double* values, long n);

}  // namespace dasp::dist
