#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hdpmean/privacy.hpp"

namespace hdpmean {

enum class DistributionKind {
  kUniform,         // uniform on [-0.5, 0.5]
  kRademacherHalf,  // +-0.5 with probability 1/2 each
  kBeta23Shifted,   // Beta(2,3) on [0,1] shifted by -0.5
  kPointMass,       // constant value in [-0.5, 0.5]
  kLeCam,           // +-0.5 with P(sign*0.5) = (1+delta)/2
};

/// Sampling distribution over the bounded domain together with its exact
/// first two moments.
struct DistributionSpec {
  DistributionKind kind = DistributionKind::kUniform;
  double point_value = 0.0;
  double lecam_delta = 0.0;
  int lecam_sign = +1;

  static DistributionSpec uniform();
  static DistributionSpec rademacher_half();
  static DistributionSpec beta23_shifted();
  static DistributionSpec point_mass(double value);
  static DistributionSpec lecam(double delta, int sign);

  double true_mean() const;
  double true_variance() const;
  std::string name() const;

  template <class Rng>
  double sample(Rng& rng) const;
};

/// Parses "uniform", "rademacher", "beta23", "point:<v>", "lecam:<delta>[:+-]".
std::optional<DistributionSpec> distribution_from_name(std::string_view token);

template <class Rng>
BoundedDataset sample_dataset(const DistributionSpec& dist, std::size_t n, Rng& rng) {
  std::vector<double> values;
  values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) values.push_back(dist.sample(rng));
  return BoundedDataset(std::move(values));
}

template <class Rng>
double DistributionSpec::sample(Rng& rng) const {
  switch (kind) {
    case DistributionKind::kUniform:
      return rng.uniform01() - 0.5;
    case DistributionKind::kRademacherHalf:
      return rng.uniform01() < 0.5 ? -0.5 : 0.5;
    case DistributionKind::kBeta23Shifted: {
      // Beta(2,3) is the second order statistic of four uniforms.
      double lo = 2.0, second = 2.0;
      for (int i = 0; i < 4; ++i) {
        const double u = rng.uniform01();
        if (u < lo) {
          second = lo;
          lo = u;
        } else if (u < second) {
          second = u;
        }
      }
      return second - 0.5;
    }
    case DistributionKind::kPointMass:
      return point_value;
    case DistributionKind::kLeCam: {
      const double p_plus = lecam_sign > 0 ? (1.0 + lecam_delta) / 2.0
                                           : (1.0 - lecam_delta) / 2.0;
      return rng.uniform01() < p_plus ? 0.5 : -0.5;
    }
  }
  return 0.0;
}

}  // namespace hdpmean
