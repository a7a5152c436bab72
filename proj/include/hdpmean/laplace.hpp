#pragma once

#include <cmath>
#include <stdexcept>

namespace hdpmean {

/// Quantile of the zero-mean Laplace law with density exp(-|x|/scale)/(2*scale).
/// The variance of the law is 2*scale^2.
inline double laplace_quantile(double scale, double u) {
  if (!(scale > 0.0)) throw std::domain_error("laplace scale must be positive");
  if (!(u > 0.0 && u < 1.0))
    throw std::domain_error("laplace quantile argument must lie in (0,1)");
  return u < 0.5 ? scale * std::log(2.0 * u) : -scale * std::log(2.0 * (1.0 - u));
}

template <class Rng>
double sample_laplace(double scale, Rng& rng) {
  if (!(scale > 0.0)) throw std::domain_error("laplace scale must be positive");
  return laplace_quantile(scale, rng.uniform01());
}

}  // namespace hdpmean
