#pragma once

// Hand-rolled random instance generators for the property tests. Every
// generator takes the case index so that a failing case can be replayed
// from the seed printed by `for_cases`.

#include <cstdint>
#include <random>
#include <string>

#include <Eigen/Dense>
#include <doctest.h>

namespace gen {

using Engine = std::mt19937_64;

inline double uniform(Engine& g, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }

inline long integer(Engine& g, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(g); }

inline Eigen::MatrixXd gaussian(Engine& g, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = n(g);
  }
  return m;
}

/// A A' / k + eps I with A p x k; k < p gives a badly conditioned matrix.
inline Eigen::MatrixXd spd(Engine& g, Eigen::Index p, double eps = 0.05) {
  const Eigen::Index k = integer(g, 1, 2 * p);
  const Eigen::MatrixXd a = gaussian(g, p, k);
  Eigen::MatrixXd m = a * a.transpose() / double(k);
  m.diagonal().array() += eps;
  return m;
}

/// Random correlation matrix: an SPD matrix rescaled to unit diagonal.
inline Eigen::MatrixXd correlation(Engine& g, Eigen::Index p) {
  const Eigen::MatrixXd s = spd(g, p, 0.2);
  const Eigen::VectorXd d = s.diagonal().array().sqrt().inverse();
  Eigen::MatrixXd c = d.asDiagonal() * s * d.asDiagonal();
  c.diagonal().setOnes();
  return c;
}

/// Design with correlated columns, always full column rank when n > p.
inline Eigen::MatrixXd design(Engine& g, Eigen::Index n, Eigen::Index p) {
  const Eigen::MatrixXd l = spd(g, p, 0.3).llt().matrixL();
  return gaussian(g, n, p) * l.transpose();
}

/// Local scales spread over several orders of magnitude.
inline Eigen::VectorXd scales(Engine& g, Eigen::Index p, double log10_lo = -1.5, double log10_hi = 1.5) {
  Eigen::VectorXd v(p);
  for (Eigen::Index j = 0; j < p; ++j) v(j) = std::pow(10.0, uniform(g, log10_lo, log10_hi));
  return v;
}

/// Runs `body(engine, case)` for `cases` seeded cases. The seed is attached
/// to the doctest context so failures name the case to replay.
template <class Body>
void for_cases(int cases, std::uint64_t base_seed, Body&& body) {
  for (int c = 0; c < cases; ++c) {
    const std::uint64_t seed = base_seed + std::uint64_t(c);
    INFO("property case " << c << " seed " << seed);
    Engine g(seed);
    body(g, c);
  }
}

}  // namespace gen
