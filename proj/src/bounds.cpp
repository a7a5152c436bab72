#include "hdpmean/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hdpmean/optimize.hpp"

namespace hdpmean {

namespace {

double saturated_bound(const TwoGroupProfile& p) {
  // (n f eps1^2 + 8) / (4n [n f eps1^2 + 8(1-f)]); finite for eps1 = 0, f = 0.
  const double nn = static_cast<double>(p.n);
  const double a = nn * p.f * p.eps1 * p.eps1;
  return (a + 8.0) / (4.0 * nn * (a + 8.0 * (1.0 - p.f)));
}

double regime_a_bound(const TwoGroupProfile& p) {
  const double ebar = p.eps_bar();
  if (ebar == 0.0) return kInf;  // capped at 1/4 by the caller
  const double nn = static_cast<double>(p.n);
  return p.eps_sq_bar() / (4.0 * nn * ebar * ebar) + 2.0 / (nn * ebar * nn * ebar);
}

bool saturated(const TwoGroupProfile& p) { return p.eps2 >= saturation_eps2(p); }

}  // namespace

double upper_bound(const TwoGroupProfile& p) {
  const double pre = saturated(p) ? saturated_bound(p) : regime_a_bound(p);
  return std::min(pre, 0.25);
}

LowerTerms lower_bound_terms(const TwoGroupProfile& p) {
  LowerTerms t;
  const double nn = static_cast<double>(p.n);
  t.l1 = 1.0 / (6.0 * nn);
  t.l2 = saturated_bound(p);
  // f(R-1)/(4n[f+r(1-f)]^2) written through eps_bar, which stays finite as
  // eps1 -> 0.
  const double ebar = p.eps_bar();
  t.l3 = ebar > 0.0 ? 2.0 / (nn * ebar * nn * ebar) : kInf;
  return t;
}

double lower_bound(const TwoGroupProfile& p) {
  if (saturated(p)) return std::min(saturated_bound(p), 0.25) / 1048.0;
  return std::min(regime_a_bound(p), 0.25) / 1560.0;
}

BoundReport bound_report(const TwoGroupProfile& p) {
  BoundReport r;
  r.upper = upper_bound(p);
  r.lower = lower_bound(p);
  r.regime = saturated(p) ? Regime::kB : Regime::kA;
  r.saturation_eps2 = saturation_eps2(p);
  const LowerTerms t = lower_bound_terms(p);
  r.l1 = t.l1;
  r.l2 = t.l2;
  r.l3 = t.l3;
  return r;
}

LeCamInstance::LeCamInstance(double d) : delta(d) {
  if (!(d >= 0.0 && d <= 0.5))
    throw std::invalid_argument("lecam delta must lie in [0, 0.5]");
}

double LeCamInstance::kl_p_exact() const {
  if (delta == 0.0) return 0.0;
  return delta * std::log((1.0 + delta) / (1.0 - delta));
}

double tv_upper_bound(const PrivacyVector& eps, long k, double tv_p, double kl_p) {
  const long n = static_cast<long>(eps.size());
  if (k < 0 || k > n) throw std::invalid_argument("k must lie in [0, n]");
  std::vector<double> sorted = eps.levels();
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (long i = 0; i < k; ++i)
    sum += -std::expm1(-sorted[static_cast<std::size_t>(i)]);  // 1 - e^-eps
  return 2.0 * tv_p * sum +
         std::sqrt(static_cast<double>(n - k) / 2.0 * kl_p);
}

double lecam_value(double gamma, double tv_q_bound) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
  const double tv = std::clamp(tv_q_bound, 0.0, 1.0);
  return gamma * gamma / 2.0 * (1.0 - tv);
}

LeCamSearchResult lower_bound_from_first_principles(const TwoGroupProfile& p) {
  const double nn = static_cast<double>(p.n);
  const double nf = nn * p.f;

  // Exact per-user TV contributions for the two-group layout, by real mass.
  const double c1 = -std::expm1(-p.eps1);
  const double c2 = std::isinf(p.eps2) ? 1.0 : -std::expm1(-p.eps2);
  const double sums[3] = {0.0, nf * c1, nf * c1 + (nn - nf) * c2};
  const long ks[3] = {0, static_cast<long>(std::lround(nf)), p.n};

  const auto value_at = [&](int which, double delta) {
    const LeCamInstance inst(delta);
    const double rest = static_cast<double>(p.n) - static_cast<double>(ks[which]);
    const double tv = 2.0 * inst.tv_p() * sums[which] +
                      std::sqrt(std::max(rest, 0.0) / 2.0 * inst.kl_p_exact());
    return lecam_value(inst.gamma(), tv);
  };

  LeCamSearchResult best;
  for (int which = 0; which < 3; ++which) {
    // Log-spaced grid over (0, 0.5] followed by a local golden polish.
    constexpr int kGrid = 2000;
    double best_delta = 0.5, best_val = value_at(which, 0.5);
    for (int j = 0; j < kGrid; ++j) {
      const double d = 0.5 * std::exp(-24.0 * (1.0 - static_cast<double>(j) /
                                                         (kGrid - 1.0)));
      const double v = value_at(which, d);
      if (v > best_val) {
        best_val = v;
        best_delta = d;
      }
    }
    const double lo = best_delta * std::exp(-24.0 / (kGrid - 1.0));
    const double hi = std::min(0.5, best_delta * std::exp(24.0 / (kGrid - 1.0)));
    const double polished = golden_section_minimize(
        [&](double d) { return -value_at(which, d); }, lo, hi, 1e-12);
    const double pv = value_at(which, polished);
    const double d_final = pv > best_val ? polished : best_delta;
    const double v_final = std::max(pv, best_val);
    if (v_final > best.value) {
      best.value = v_final;
      best.delta = d_final;
      best.k = ks[which];
    }
  }
  return best;
}

}  // namespace hdpmean
