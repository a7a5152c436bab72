#include "hdpmean/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hdpmean/optimize.hpp"

namespace hdpmean {

TwoGroupProfile::TwoGroupProfile(double eps1_in, double eps2_in, long n_in, double f_in)
    : eps1(eps1_in), eps2(eps2_in), n(n_in), f(f_in) {
  if (std::isnan(eps1) || std::isnan(eps2) || eps1 < 0.0 || eps2 < 0.0)
    throw std::invalid_argument("privacy levels must be >= 0");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("f must lie in [0,1]");
  if (eps1 > eps2) {  // normalize so group 1 is the stricter one
    std::swap(eps1, eps2);
    f = 1.0 - f;
  }
}

double saturation_ratio(const TwoGroupProfile& p) {
  if (p.degenerate_group()) return kInf;
  return 1.0 + 8.0 / (p.eps1 * p.eps1 * static_cast<double>(p.n) * p.f);
}

double saturation_eps2(const TwoGroupProfile& p) {
  if (p.degenerate_group()) return kInf;
  return p.eps1 + 8.0 / (static_cast<double>(p.n) * p.f * p.eps1);
}

namespace {

TwoGroupSolution finalize_two_group(const TwoGroupProfile& p, double w1, double w2,
                                    double eta, Regime regime) {
  TwoGroupSolution s;
  s.w1 = w1;
  s.w2 = w2;
  s.eta = eta;
  s.regime = regime;
  const double nn = static_cast<double>(p.n);
  const double norm_sq = nn * (p.f * w1 * w1 + (1.0 - p.f) * w2 * w2);
  s.objective = norm_sq / 4.0 + 2.0 * eta * eta;
  s.degenerate = !(s.objective <= 0.25);
  return s;
}

}  // namespace

TwoGroupSolution solve_two_group(const TwoGroupProfile& p) {
  const double nn = static_cast<double>(p.n);
  if (p.eps2 == 0.0) {
    // Fully private population: no unbiased affine release exists.
    TwoGroupSolution s;
    s.eta = kInf;
    s.objective = kInf;
    s.degenerate = true;
    return s;
  }
  if (p.eps2 >= saturation_eps2(p)) {
    // Saturated regime: weights contain no eps2. Evaluated through
    // a = n*f*eps1^2 so the eps1 -> 0 and f -> 0 limits stay finite.
    const double a = nn * p.f * p.eps1 * p.eps1;
    const double d = a + 8.0 * (1.0 - p.f);
    const double w1 = a / (nn * d);
    const double w2 = (a + 8.0) / (nn * d);
    const double eta = nn * p.f * p.eps1 / (nn * d);
    return finalize_two_group(p, w1, w2, eta, Regime::kB);
  }
  const double ebar = p.eps_bar();
  const double w1 = p.eps1 / (nn * ebar);
  const double w2 = p.eps2 / (nn * ebar);
  const double eta = 1.0 / (nn * ebar);
  return finalize_two_group(p, w1, w2, eta, Regime::kA);
}

std::vector<double> project_capped_simplex(const PrivacyVector& eps, double eta) {
  const std::size_t n = eps.size();
  if (!(eta >= 0.0)) throw std::domain_error("noise scale must be >= 0");
  std::vector<double> caps(n);
  double cap_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    caps[i] = std::isinf(eps[i]) ? kInf : eps[i] * eta;
    cap_sum += caps[i];
  }
  if (!(cap_sum >= 1.0 - 1e-12))
    throw std::domain_error("infeasible projection: noise scale below 1/||eps||_1");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return caps[a] < caps[b]; });

  // Saturate the j smallest caps, spread the remainder evenly; the first j
  // with lambda <= next cap is the water level.
  std::vector<double> w(n, 0.0);
  double prefix = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double lambda = (1.0 - prefix) / static_cast<double>(n - j);
    if (lambda <= caps[order[j]]) {
      for (std::size_t k = 0; k < j; ++k) w[order[k]] = caps[order[k]];
      for (std::size_t k = j; k < n; ++k) w[order[k]] = lambda;
      return w;
    }
    prefix += caps[order[j]];
  }
  // All caps tight (cap_sum == 1 up to rounding).
  for (std::size_t i = 0; i < n; ++i) w[i] = caps[i];
  return w;
}

namespace {

double eta_of_weights(const PrivacyVector& eps, const std::vector<double>& w) {
  double eta = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0 || std::isinf(eps[i])) continue;
    eta = std::max(eta, w[i] / eps[i]);
  }
  return eta;
}

double objective_of(const std::vector<double>& w, double eta) {
  double norm_sq = 0.0;
  for (double x : w) norm_sq += x * x;
  return norm_sq / 4.0 + 2.0 * eta * eta;
}

}  // namespace

WeightSolution solve_general(const PrivacyVector& eps) {
  const std::size_t n = eps.size();
  WeightSolution sol;
  sol.weights.assign(n, 0.0);

  std::size_t positive = 0, public_users = 0;
  double finite_sum = 0.0, min_pos_finite = kInf;
  for (std::size_t i = 0; i < n; ++i) {
    if (eps[i] > 0.0) ++positive;
    if (std::isinf(eps[i])) {
      ++public_users;
    } else {
      finite_sum += eps[i];
      if (eps[i] > 0.0) min_pos_finite = std::min(min_pos_finite, eps[i]);
    }
  }

  if (positive == 0) {
    // Everyone fully private: no unbiased affine release exists.
    sol.eta = kInf;
    sol.objective = kInf;
    sol.degenerate = true;
    return sol;
  }
  if (positive == public_users) {
    // Only public users carry weight: plain mean over them, no noise.
    const double w = 1.0 / static_cast<double>(public_users);
    for (std::size_t i = 0; i < n; ++i)
      if (std::isinf(eps[i])) sol.weights[i] = w;
    sol.eta = 0.0;
    sol.objective = objective_of(sol.weights, 0.0);
    sol.degenerate = !(sol.objective <= 0.25);
    return sol;
  }

  const double lo = public_users > 0 ? 0.0 : 1.0 / finite_sum;
  // Beyond 1/(m * min eps) no cap binds and the objective grows as 2*eta^2.
  const double hi =
      std::max(lo, 1.0 / (static_cast<double>(positive) * min_pos_finite));

  const auto value = [&](double eta) {
    const std::vector<double> w = project_capped_simplex(eps, eta);
    return objective_of(w, eta_of_weights(eps, w));
  };
  const double eta_star = golden_section_minimize(value, lo, hi, 1e-10);

  sol.weights = project_capped_simplex(eps, eta_star);
  sol.eta = eta_of_weights(eps, sol.weights);
  sol.objective = objective_of(sol.weights, sol.eta);
  sol.degenerate = !(sol.objective <= 0.25);
  return sol;
}

std::pair<long, long> rounded_group_sizes(const TwoGroupProfile& p) {
  const long n1 = std::lround(static_cast<double>(p.n) * p.f);
  return {n1, p.n - n1};
}

PrivacyVector two_group_levels(const TwoGroupProfile& p) {
  const auto [n1, n2] = rounded_group_sizes(p);
  std::vector<double> levels;
  levels.reserve(static_cast<std::size_t>(p.n));
  levels.insert(levels.end(), static_cast<std::size_t>(n1), p.eps1);
  levels.insert(levels.end(), static_cast<std::size_t>(n2), p.eps2);
  return PrivacyVector(std::move(levels));
}

}  // namespace hdpmean
