#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hdpmean/bounds.hpp"
#include "hdpmean/rng.hpp"
#include "hdpmean/simulate.hpp"

namespace hdpmean {

// Deterministic seed per sweep point so rows are independent of sweep order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(splitmix64(seed) ^ splitmix64(tag + 0x9d2c5680ULL));
}

/// One row of the n-sweep: second-order error view, transform =
/// (mse - 1/(12n)) * n^2.
struct SweepNRow {
  std::string mechanism;
  long n = 0;
  double eps1 = 0.0, eps2 = 0.0, f = 0.0, realized_f = 0.0;
  long trials = 0;
  std::uint64_t seed = 0;
  double mse = 0.0, std_error = 0.0, transform = 0.0;
  double analytic_total = 0.0;
  double upper = 0.0;
  bool infeasible = false;
  std::string reason;
};

std::vector<SweepNRow> sweep_n(double eps1, double eps2, double f,
                               const DistributionSpec& dist,
                               std::span<const long> n_values,
                               std::span<const MechanismKind> mechanisms,
                               long trials, std::uint64_t seed, int threads = 1);

/// One row of the eps2-sweep: saturation view, mse_x1e4 = mse * 1e4, plus the
/// saturation marker and the two-group weight ratio w2/w1 = min(r, R).
struct SweepEps2Row {
  std::string mechanism;
  double eps2 = 0.0;
  double eps1 = 0.0, f = 0.0, realized_f = 0.0;
  long n = 0;
  long trials = 0;
  std::uint64_t seed = 0;
  double mse = 0.0, std_error = 0.0, mse_x1e4 = 0.0;
  double analytic_total = 0.0;
  double upper = 0.0;
  double saturation_eps2 = 0.0;
  double weight_ratio = 0.0;
  bool infeasible = false;
  std::string reason;
};

std::vector<SweepEps2Row> sweep_eps2(double eps1, long n, double f,
                                     const DistributionSpec& dist,
                                     std::span<const double> eps2_values,
                                     std::span<const MechanismKind> mechanisms,
                                     long trials, std::uint64_t seed,
                                     int threads = 1);

/// Closed-form weight-ratio sweep (no simulation).
struct WeightRatioRow {
  double eps2 = 0.0;
  double r = 0.0;
  double saturation_ratio = 0.0;
  double ratio = 0.0;  // w2/w1
};

std::vector<WeightRatioRow> weight_ratio_sweep(double eps1, long n, double f,
                                               std::span<const double> eps2_values);

/// Frozen-draw comparison across all mechanisms for high/low heterogeneity in
/// the levels: ln(eps) uniform on the given range (natural log), one draw per
/// regime, Beta(2,3) data.
struct Table2Row {
  std::string regime;  // "low" or "high"
  std::string mechanism;
  double ln_mse = 0.0;
  double mse = 0.0, std_error = 0.0;
  double analytic_total = 0.0;
  bool infeasible = false;
  std::string reason;
};

struct Table2Result {
  std::vector<double> eps_low, eps_high;
  std::vector<Table2Row> rows;
};

Table2Result table2_experiment(long n, std::pair<double, double> low_range,
                               std::pair<double, double> high_range, long trials,
                               std::uint64_t seed, int threads = 1);

}  // namespace hdpmean
