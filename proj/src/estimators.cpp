#include "hdpmean/estimators.hpp"

#include <cmath>

#include "hdpmean/rng.hpp"

namespace hdpmean {

const char* mechanism_name(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kAdpm: return "adpm";
    case MechanismKind::kUni: return "uni";
    case MechanismKind::kSm: return "sm";
    case MechanismKind::kPropDpm: return "propdpm";
    case MechanismKind::kLdpe: return "ldpe";
    case MechanismKind::kStretch: return "stretch";
  }
  return "?";
}

std::optional<MechanismKind> mechanism_from_name(std::string_view name) {
  if (name == "adpm") return MechanismKind::kAdpm;
  if (name == "uni") return MechanismKind::kUni;
  if (name == "sm") return MechanismKind::kSm;
  if (name == "propdpm") return MechanismKind::kPropDpm;
  if (name == "ldpe") return MechanismKind::kLdpe;
  if (name == "stretch") return MechanismKind::kStretch;
  return std::nullopt;
}

void MechanismSpec::validate() const {
  if (profile.has_value() == levels.has_value())
    throw std::invalid_argument(
        "mechanism spec needs exactly one of profile / levels");
  if (kind == MechanismKind::kLdpe && !profile.has_value())
    throw std::invalid_argument("ldpe requires a two-group profile");
}

PrivacyVector MechanismSpec::resolved_levels() const {
  validate();
  return profile.has_value() ? two_group_levels(*profile) : *levels;
}

namespace {

PreparedMechanism make(MechanismKind kind, bool clamp,
                       std::variant<AffineKernel, ConstantKernel, SmKernel,
                                    LdpeKernel, LdpeGeneralKernel>
                           kernel) {
  PreparedMechanism m;
  m.kind = kind;
  m.clamp = clamp;
  m.kernel = std::move(kernel);
  return m;
}

PreparedMechanism prepare_adpm(const PrivacyVector& eps, bool clamp) {
  const WeightSolution sol = solve_general(eps);
  if (sol.degenerate) return make(MechanismKind::kAdpm, clamp, ConstantKernel{0.0});
  return make(MechanismKind::kAdpm, clamp, AffineKernel{sol.weights, sol.eta});
}

PreparedMechanism prepare_uni(const PrivacyVector& eps, bool clamp) {
  const double eps1 = eps.min_level();
  if (!(eps1 > 0.0))
    throw InfeasibleMechanism("uni requires a positive minimum level");
  const double n = static_cast<double>(eps.size());
  AffineKernel k;
  k.weights.assign(eps.size(), 1.0 / n);
  k.eta = std::isinf(eps1) ? 0.0 : 1.0 / (n * eps1);
  return make(MechanismKind::kUni, clamp, std::move(k));
}

PreparedMechanism prepare_sm(const PrivacyVector& eps, bool clamp) {
  const double t = eps.max_level();
  if (std::isinf(t)) throw InfeasibleMechanism("sm undefined for public users");
  if (!(t > 0.0)) throw InfeasibleMechanism("sm requires a positive level");
  SmKernel k;
  k.t = t;
  k.probs.reserve(eps.size());
  const double denom = std::expm1(t);
  for (std::size_t i = 0; i < eps.size(); ++i)
    k.probs.push_back(std::expm1(eps[i]) / denom);
  return make(MechanismKind::kSm, clamp, std::move(k));
}

PreparedMechanism prepare_propdpm(const PrivacyVector& eps, bool clamp) {
  if (std::isinf(eps.max_level()))
    throw InfeasibleMechanism("propdpm infeasible with public users");
  const double s = eps.l1_norm();
  if (!(s > 0.0))
    throw InfeasibleMechanism("propdpm requires a positive total budget");
  AffineKernel k;
  k.weights.reserve(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) k.weights.push_back(eps[i] / s);
  k.eta = 1.0 / s;
  return make(MechanismKind::kPropDpm, clamp, std::move(k));
}

double group_error_proxy(double count, double eps) {
  // Worst-case MSE of one group's local estimate: 1/(4 n_g) + 2/(n_g eps)^2,
  // with the noise term dropped for a public group and infinite for eps = 0.
  const double base = 1.0 / (4.0 * count);
  if (std::isinf(eps)) return base;
  if (eps == 0.0) return kInf;
  return base + 2.0 / (count * eps * count * eps);
}

PreparedMechanism prepare_ldpe(const TwoGroupProfile& p, bool clamp) {
  const auto [n1, n2] = rounded_group_sizes(p);
  if (n1 < 1 || n2 < 1)
    throw InfeasibleMechanism("ldpe requires both groups nonempty");
  LdpeKernel k;
  k.n1 = static_cast<std::size_t>(n1);
  k.n2 = static_cast<std::size_t>(n2);
  const double c1 = static_cast<double>(n1), c2 = static_cast<double>(n2);
  k.scale1 = std::isinf(p.eps1) ? 0.0 : 1.0 / (p.eps1 * c1);
  k.scale2 = std::isinf(p.eps2) ? 0.0 : 1.0 / (p.eps2 * c2);
  const double e1 = group_error_proxy(c1, p.eps1);
  const double e2 = group_error_proxy(c2, p.eps2);
  if (std::isinf(e1) && std::isinf(e2))
    throw InfeasibleMechanism("ldpe requires a positive level in some group");
  // Optimal linear combination under the proxies: weights 1/E_g, normalized.
  if (std::isinf(e1)) {
    k.c1 = 0.0;
    k.c2 = 1.0;
  } else if (std::isinf(e2)) {
    k.c1 = 1.0;
    k.c2 = 0.0;
  } else {
    k.c1 = e2 / (e1 + e2);
    k.c2 = e1 / (e1 + e2);
  }
  if (k.scale1 == kInf) k.scale1 = 0.0;  // weight is 0; never sampled
  if (k.scale2 == kInf) k.scale2 = 0.0;
  return make(MechanismKind::kLdpe, clamp, std::move(k));
}

PreparedMechanism prepare_stretch(const PrivacyVector& eps, bool clamp) {
  const double emax = eps.max_level();
  if (std::isinf(emax))
    throw InfeasibleMechanism("stretch infeasible with public users");
  if (!(emax > 0.0))
    throw InfeasibleMechanism("stretch requires a positive level");
  const double n = static_cast<double>(eps.size());
  AffineKernel k;
  k.weights.reserve(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i)
    k.weights.push_back(eps[i] / (n * emax));
  k.eta = 1.0 / (n * emax);
  return make(MechanismKind::kStretch, clamp, std::move(k));
}

}  // namespace

PreparedMechanism prepare_mechanism(const MechanismSpec& spec) {
  spec.validate();
  if (spec.kind == MechanismKind::kLdpe)
    return prepare_ldpe(*spec.profile, spec.clamp);
  const PrivacyVector eps = spec.resolved_levels();
  switch (spec.kind) {
    case MechanismKind::kAdpm: return prepare_adpm(eps, spec.clamp);
    case MechanismKind::kUni: return prepare_uni(eps, spec.clamp);
    case MechanismKind::kSm: return prepare_sm(eps, spec.clamp);
    case MechanismKind::kPropDpm: return prepare_propdpm(eps, spec.clamp);
    case MechanismKind::kStretch: return prepare_stretch(eps, spec.clamp);
    case MechanismKind::kLdpe: break;
  }
  throw std::logic_error("unreachable");
}

PreparedMechanism prepare_ldpe_general(const PrivacyVector& eps, bool clamp) {
  LdpeGeneralKernel k;
  const std::size_t n = eps.size();
  k.scales.resize(n);
  k.combo.resize(n);
  double inv_sum = 0.0;
  std::vector<double> inv(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    k.scales[i] = std::isinf(eps[i]) ? 0.0 : (eps[i] > 0.0 ? 1.0 / eps[i] : 0.0);
    const double e = group_error_proxy(1.0, eps[i]);
    inv[i] = std::isinf(e) ? 0.0 : 1.0 / e;
    inv_sum += inv[i];
  }
  if (!(inv_sum > 0.0))
    throw InfeasibleMechanism("ldpe requires a positive level somewhere");
  for (std::size_t i = 0; i < n; ++i) k.combo[i] = inv[i] / inv_sum;
  return make(MechanismKind::kLdpe, clamp, std::move(k));
}

namespace {

// Distribution of the SM subsample size: exact Poisson-binomial pmf for
// n <= 30, otherwise a seeded inner simulation (tagged approximate).
struct SubsampleMoments {
  double inv_m = 0.0;     // E[1/m; m >= 1]
  double inv_m_sq = 0.0;  // E[1/m^2; m >= 1]
  double p_empty = 0.0;
  bool approximate = false;
};

SubsampleMoments subsample_moments(const std::vector<double>& probs) {
  SubsampleMoments out;
  const std::size_t n = probs.size();
  if (n <= 30) {
    std::vector<double> pmf(n + 1, 0.0);
    pmf[0] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t m = std::min(i + 1, n); m > 0; --m)
        pmf[m] = pmf[m] * (1.0 - probs[i]) + pmf[m - 1] * probs[i];
      pmf[0] *= 1.0 - probs[i];
    }
    out.p_empty = pmf[0];
    for (std::size_t m = 1; m <= n; ++m) {
      const double dm = static_cast<double>(m);
      out.inv_m += pmf[m] / dm;
      out.inv_m_sq += pmf[m] / (dm * dm);
    }
    return out;
  }
  constexpr long kDraws = 100000;
  RandomStream rng(0x5eedULL);
  long empty = 0;
  for (long d = 0; d < kDraws; ++d) {
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (rng.uniform01() < probs[i]) ++m;
    if (m == 0) {
      ++empty;
      continue;
    }
    const double dm = static_cast<double>(m);
    out.inv_m += 1.0 / dm;
    out.inv_m_sq += 1.0 / (dm * dm);
  }
  out.inv_m /= kDraws;
  out.inv_m_sq /= kDraws;
  out.p_empty = static_cast<double>(empty) / kDraws;
  out.approximate = true;
  return out;
}

}  // namespace

AnalyticMse analytic_mse(const PreparedMechanism& mech, double dist_variance,
                         double dist_mean) {
  AnalyticMse out;
  out.approximate = mech.clamp;  // clamping only lowers the true MSE
  if (const auto* aff = std::get_if<AffineKernel>(&mech.kernel)) {
    double wsum = 0.0, wsq = 0.0;
    for (double w : aff->weights) {
      wsum += w;
      wsq += w * w;
    }
    out.variance_term = dist_variance * wsq;
    out.noise_term = 2.0 * aff->eta * aff->eta;
    const double bias = dist_mean * (wsum - 1.0);
    out.bias_sq_term = bias * bias;
  } else if (const auto* c = std::get_if<ConstantKernel>(&mech.kernel)) {
    const double bias = c->value - dist_mean;
    out.bias_sq_term = bias * bias;
  } else if (const auto* sm = std::get_if<SmKernel>(&mech.kernel)) {
    const SubsampleMoments mom = subsample_moments(sm->probs);
    out.variance_term = dist_variance * mom.inv_m;
    out.noise_term = 2.0 / (sm->t * sm->t) * mom.inv_m_sq;
    out.bias_sq_term = mom.p_empty * dist_mean * dist_mean;
    out.approximate = out.approximate || mom.approximate;
  } else if (const auto* l = std::get_if<LdpeKernel>(&mech.kernel)) {
    out.variance_term =
        l->c1 * l->c1 * dist_variance / static_cast<double>(l->n1) +
        l->c2 * l->c2 * dist_variance / static_cast<double>(l->n2);
    out.noise_term = l->c1 * l->c1 * 2.0 * l->scale1 * l->scale1 +
                     l->c2 * l->c2 * 2.0 * l->scale2 * l->scale2;
  } else {
    const auto& g = std::get<LdpeGeneralKernel>(mech.kernel);
    for (std::size_t i = 0; i < g.combo.size(); ++i) {
      out.variance_term += g.combo[i] * g.combo[i] * dist_variance;
      out.noise_term += g.combo[i] * g.combo[i] * 2.0 * g.scales[i] * g.scales[i];
    }
  }
  return out;
}

AnalyticMse analytic_mse(const MechanismSpec& spec, double dist_variance,
                         double dist_mean) {
  try {
    return analytic_mse(prepare_mechanism(spec), dist_variance, dist_mean);
  } catch (const InfeasibleMechanism& e) {
    AnalyticMse out;
    out.infeasible = true;
    out.reason = e.what();
    return out;
  }
}

}  // namespace hdpmean
