#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace dasp {

/// Seeded random stream. Every stochastic routine takes one of these by
/// reference; a stream is owned by one thread at a time.
///
/// Independent substreams are derived from (master seed, stream id) through
/// std::seed_seq, so a task's draws never depend on scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  Rng(std::uint64_t seed, std::uint64_t stream);

  double uniform();            // (0, 1), never returns 0
  double normal();             // N(0, 1)
  double exponential(double rate);
  double gamma(double shape, double rate);
  /// log of a Gamma(shape, 1) variate, accurate for very small shapes.
  double log_gamma_variate(double shape);
  double half_cauchy(double scale);
  double student_t(double nu);

  Eigen::VectorXd normal_vector(Eigen::Index n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dasp
