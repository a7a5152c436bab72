#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hdpmean/privacy.hpp"

namespace hdpmean {

enum class Regime { kA, kB };  // A: r <= R (proportional), B: r >= R (saturated)

inline const char* regime_name(Regime r) { return r == Regime::kA ? "A" : "B"; }

/// Two groups of users: a fraction f at level eps1 and the rest at eps2,
/// normalized so eps1 <= eps2. Group masses n*f and n*(1-f) are treated as
/// real numbers for formula evaluation; simulation layers round them.
struct TwoGroupProfile {
  double eps1 = 0.0;
  double eps2 = 0.0;
  long n = 0;
  double f = 0.0;

  TwoGroupProfile(double eps1_in, double eps2_in, long n_in, double f_in);

  double r() const { return eps2 / eps1; }
  double eps_bar() const { return f * eps1 + (1.0 - f) * eps2; }
  double eps_sq_bar() const { return f * eps1 * eps1 + (1.0 - f) * eps2 * eps2; }

  // True when a group contributes no privacy budget (eps1 = 0 or f = 0); the
  // saturation ratio is +inf and the threshold is never crossed by finite eps2.
  bool degenerate_group() const { return eps1 == 0.0 || f == 0.0; }
};

/// R = 1 + 8/(eps1^2 * n * f); +inf when the first group is degenerate.
double saturation_ratio(const TwoGroupProfile& p);

/// Threshold value of eps2 beyond which the optimal weights stop changing.
/// Evaluated as eps1 + 8/(n*f*eps1), which stays finite-safe as eps1 -> 0.
double saturation_eps2(const TwoGroupProfile& p);

/// Closed-form optimum of the two-group weight program.
struct TwoGroupSolution {
  double w1 = 0.0;  // per-user weight in group 1
  double w2 = 0.0;  // per-user weight in group 2
  double eta = 0.0;
  double objective = 0.0;  // ||w||^2/4 + 2*eta^2
  bool degenerate = false;  // objective > 1/4: mechanism outputs constant 0
  Regime regime = Regime::kA;

  double weight_ratio() const { return w2 / w1; }
};

TwoGroupSolution solve_two_group(const TwoGroupProfile& p);

/// General solution over an arbitrary privacy vector.
struct WeightSolution {
  std::vector<double> weights;
  double eta = 0.0;
  double objective = 0.0;
  bool degenerate = false;
};

/// Minimum-l2-norm point of the simplex with per-coordinate caps eps_i*eta.
/// Solution has the water-filling form w_i = min(lambda, eps_i*eta); users
/// with equal caps form blocks and receive equal weights. Throws when
/// eta < 1/||eps||_1 (caps cannot reach the simplex).
std::vector<double> project_capped_simplex(const PrivacyVector& eps, double eta);

/// Minimizes ||w||^2/4 + 2*max_i(w_i/eps_i)^2 over the simplex by a
/// golden-section search on the noise scale with an exact capped-simplex
/// projection inside. Zero-level users are forced to weight 0.
WeightSolution solve_general(const PrivacyVector& eps);

/// Integer group sizes for simulating a two-group profile: n*f rounded to
/// the nearest integer. first = group-1 count, second = group-2 count.
std::pair<long, long> rounded_group_sizes(const TwoGroupProfile& p);

/// Per-user levels for the rounded two-group layout (group 1 first).
PrivacyVector two_group_levels(const TwoGroupProfile& p);

}  // namespace hdpmean
