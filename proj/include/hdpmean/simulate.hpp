#pragma once

#include <cstdint>
#include <string>

#include "hdpmean/distributions.hpp"
#include "hdpmean/estimators.hpp"

namespace hdpmean {

/// Empirical MSE of one mechanism under one distribution. Deterministic for a
/// fixed (config, seed) at any thread count: every trial draws from its own
/// substream and the reduction order is fixed.
struct SimResult {
  double mse = 0.0;
  double std_error = 0.0;
  long trials = 0;
  std::uint64_t seed = 0;
  AnalyticMse analytic_ref;
  double realized_f = 0.0;  // group fraction after integer rounding; 0 if n/a
  bool infeasible = false;
  std::string reason;
};

/// Runs `trials` independent trials of: sample an i.i.d. dataset, apply the
/// mechanism, square the error against the true mean. Infeasible mechanisms
/// yield a tagged result rather than a throw.
SimResult estimate_mse(const MechanismSpec& spec, const DistributionSpec& dist,
                       long trials, std::uint64_t seed, int threads = 1);

/// Same harness for an already-prepared mechanism (used by the table-2
/// experiment, which freezes one privacy draw across mechanisms).
SimResult estimate_mse_prepared(const PreparedMechanism& mech, std::size_t n,
                                const DistributionSpec& dist, long trials,
                                std::uint64_t seed, int threads = 1);

}  // namespace hdpmean
