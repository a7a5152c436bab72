#pragma once

#include <vector>

#include "hdpmean/privacy.hpp"
#include "hdpmean/weights.hpp"

namespace hdpmean {

/// Minimax error bracket for a two-group profile.
struct BoundReport {
  double upper = 0.0;
  double lower = 0.0;
  Regime regime = Regime::kA;
  double saturation_eps2 = 0.0;
  double l1 = 0.0, l2 = 0.0, l3 = 0.0;
};

/// Worst-case MSE achieved by the optimal affine release, capped at 1/4.
/// Regime A evaluates eps_sq_bar/(4 n eps_bar^2) + 2/(n eps_bar)^2; regime B
/// the eps2-free saturated form (n f eps1^2 + 8)/(4n [n f eps1^2 + 8(1-f)]).
double upper_bound(const TwoGroupProfile& p);

struct LowerTerms {
  double l1 = 0.0;  // 1/(6n)
  double l2 = 0.0;  // R/(4n[f+(1-f)R]), evaluated in the saturated stable form
  double l3 = 0.0;  // f(R-1)/(4n[f+r(1-f)]^2) == 2/(n eps_bar)^2
};

LowerTerms lower_bound_terms(const TwoGroupProfile& p);

/// Minimax lower bound with explicit constants: regime A is U(r)/1560 with
/// U(r) the regime-A upper bound, regime B is L2/1048, each min'd with 1/4
/// before the constant.
double lower_bound(const TwoGroupProfile& p);

BoundReport bound_report(const TwoGroupProfile& p);

/// Two-point testing instance: +-0.5-valued distributions with means +-delta/2.
struct LeCamInstance {
  double delta = 0.0;

  explicit LeCamInstance(double d);

  double mean_p1() const { return delta / 2.0; }
  double mean_p2() const { return -delta / 2.0; }
  double gamma() const { return delta / 2.0; }
  double tv_p() const { return delta; }
  double kl_p_bound() const { return 3.0 * delta * delta; }
  // KL(P1 || P2) = delta * ln((1+delta)/(1-delta)), below the 3*delta^2
  // bound on [0, 0.5].
  double kl_p_exact() const;
};

/// Bound on ||Q1 - Q2||_TV for the output laws of any eps-DP mechanism fed
/// the two product distributions: 2*tv_p*sum of the k smallest (1-e^-eps_i)
/// plus sqrt((n-k)/2 * kl_p). Levels are sorted ascending internally.
double tv_upper_bound(const PrivacyVector& eps, long k, double tv_p, double kl_p);

/// gamma^2/2 * (1 - tv_q_bound), with tv_q_bound clipped to [0,1].
double lecam_value(double gamma, double tv_q_bound);

struct LeCamSearchResult {
  double value = 0.0;
  double delta = 0.0;
  long k = 0;
};

/// Recomputes the lower bound from scratch: maximizes the two-point value
/// over delta in (0, 0.5] and k in {0, nf, n}, using the exact Bernoulli KL.
LeCamSearchResult lower_bound_from_first_principles(const TwoGroupProfile& p);

}  // namespace hdpmean
