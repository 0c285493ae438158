#pragma once

#include <cmath>
#include <limits>

#include "dasp/error.hpp"
#include "dasp/rng.hpp"

namespace dasp::detail {

/// Univariate stepping-out slice sampler (Neal 2003) restricted to [lo, hi].
/// `logf` may return -inf outside its support; it must be finite at x0.
template <class F>
double slice_sample(F&& logf, double x0, double width, Rng& rng, double lo, double hi, int max_steps = 32) {
  const double f0 = logf(x0);
  if (!std::isfinite(f0)) throw Error(ErrorKind::NonFiniteTarget, "slice sampler started at a non-finite point");
  const double level = f0 - rng.exponential(1.0);

  double left = x0 - width * rng.uniform();
  double right = left + width;
  int j = int(std::floor(max_steps * rng.uniform()));
  int k = max_steps - 1 - j;
  while (j-- > 0 && left > lo && logf(left) > level) left -= width;
  while (k-- > 0 && right < hi && logf(right) > level) right += width;
  if (left < lo) left = lo;
  if (right > hi) right = hi;

  for (int iter = 0; iter < 200; ++iter) {
    const double x1 = left + (right - left) * rng.uniform();
    if (logf(x1) > level) return x1;
    if (x1 < x0) {
      left = x1;
    } else {
      right = x1;
    }
  }
  return x0;
}

}  // namespace dasp::detail
