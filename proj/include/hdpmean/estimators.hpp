#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hdpmean/privacy.hpp"
#include "hdpmean/weights.hpp"

namespace hdpmean {

enum class MechanismKind { kAdpm, kUni, kSm, kPropDpm, kLdpe, kStretch };

const char* mechanism_name(MechanismKind kind);
std::optional<MechanismKind> mechanism_from_name(std::string_view name);

/// Raised when a mechanism cannot run under the given privacy input (e.g.
/// proportional weighting with a public user). Sweep layers catch this and
/// record an infeasible row instead of aborting.
struct InfeasibleMechanism : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A mechanism request: which estimator, which privacy input (two-group
/// profile or explicit per-user levels), and whether to clamp the output
/// back into [-0.5, 0.5] (off by default; clamping is post-processing and
/// can only reduce MSE).
struct MechanismSpec {
  MechanismKind kind = MechanismKind::kAdpm;
  std::optional<TwoGroupProfile> profile;
  std::optional<PrivacyVector> levels;
  bool clamp = false;

  void validate() const;
  PrivacyVector resolved_levels() const;
};

// --- prepared kernels -------------------------------------------------------
// Weight solving and probability tables depend only on the privacy input, so
// they are computed once and reused across Monte Carlo trials.

struct AffineKernel {
  std::vector<double> weights;
  double eta = 0.0;  // 0 means no noise (all weighted users public)
};

struct ConstantKernel {
  double value = 0.0;
};

struct SmKernel {
  std::vector<double> probs;
  double t = 0.0;
};

struct LdpeKernel {
  std::size_t n1 = 0, n2 = 0;
  double scale1 = 0.0, scale2 = 0.0;  // Laplace scales per group mean
  double c1 = 0.0, c2 = 0.0;          // combination weights, c1 + c2 = 1
};

// Per-user local release for arbitrary levels: y_i = x_i + Laplace(1/eps_i),
// combined with weights inversely proportional to the worst-case error
// proxies E_i = 1/4 + 2/eps_i^2.
struct LdpeGeneralKernel {
  std::vector<double> scales;
  std::vector<double> combo;
};

struct PreparedMechanism {
  MechanismKind kind = MechanismKind::kAdpm;
  bool clamp = false;
  std::variant<AffineKernel, ConstantKernel, SmKernel, LdpeKernel, LdpeGeneralKernel>
      kernel;

  template <class Rng>
  double operator()(const BoundedDataset& x, Rng& rng) const;
};

PreparedMechanism prepare_mechanism(const MechanismSpec& spec);

/// LDPE extension used when no two-group structure exists (arbitrary levels).
PreparedMechanism prepare_ldpe_general(const PrivacyVector& eps, bool clamp = false);

// --- closed-form error ------------------------------------------------------

struct AnalyticMse {
  double variance_term = 0.0;
  double noise_term = 0.0;
  double bias_sq_term = 0.0;
  bool infeasible = false;
  bool approximate = false;  // SM beyond exact enumeration, or clamped output
  std::string reason;

  double total() const {
    return infeasible ? kInf : variance_term + noise_term + bias_sq_term;
  }
};

/// Exact MSE of the mechanism when data is i.i.d. with the given variance and
/// mean. Infeasible mechanisms yield a tagged infinite total, not a throw.
AnalyticMse analytic_mse(const MechanismSpec& spec, double dist_variance,
                         double dist_mean);

AnalyticMse analytic_mse(const PreparedMechanism& mech, double dist_variance,
                         double dist_mean);

// --- one-shot estimator calls ----------------------------------------------

template <class Rng>
double adpm_estimate(const PrivacyVector& eps, const BoundedDataset& x, Rng& rng);

template <class Rng>
double uni_estimate(double eps1, const BoundedDataset& x, Rng& rng);

template <class Rng>
double sm_estimate(const PrivacyVector& eps, const BoundedDataset& x, Rng& rng);

template <class Rng>
double propdpm_estimate(const PrivacyVector& eps, const BoundedDataset& x, Rng& rng);

template <class Rng>
double ldpe_estimate(const TwoGroupProfile& profile, const BoundedDataset& x, Rng& rng);

template <class Rng>
double stretch_estimate(const PrivacyVector& eps, const BoundedDataset& x, Rng& rng);

// --- template bodies ---------------------------------------------------------

template <class Rng>
double PreparedMechanism::operator()(const BoundedDataset& x, Rng& rng) const {
  double out = 0.0;
  if (const auto* aff = std::get_if<AffineKernel>(&kernel)) {
    out = affine_release(x, aff->weights, aff->eta, rng);
  } else if (const auto* c = std::get_if<ConstantKernel>(&kernel)) {
    out = c->value;
  } else if (const auto* sm = std::get_if<SmKernel>(&kernel)) {
    if (x.size() != sm->probs.size())
      throw std::invalid_argument("dataset/privacy length mismatch");
    double sum = 0.0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (rng.uniform01() < sm->probs[i]) {
        sum += x[i];
        ++m;
      }
    }
    out = m == 0 ? 0.0
                 : sum / static_cast<double>(m) +
                       sample_laplace(1.0 / (static_cast<double>(m) * sm->t), rng);
  } else if (const auto* l = std::get_if<LdpeKernel>(&kernel)) {
    if (x.size() != l->n1 + l->n2)
      throw std::invalid_argument("dataset/profile length mismatch");
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < l->n1; ++i) s1 += x[i];
    for (std::size_t i = l->n1; i < x.size(); ++i) s2 += x[i];
    double y1 = s1 / static_cast<double>(l->n1);
    double y2 = s2 / static_cast<double>(l->n2);
    if (l->c1 > 0.0 && l->scale1 > 0.0) y1 += sample_laplace(l->scale1, rng);
    if (l->c2 > 0.0 && l->scale2 > 0.0) y2 += sample_laplace(l->scale2, rng);
    out = l->c1 * y1 + l->c2 * y2;
  } else {
    const auto& g = std::get<LdpeGeneralKernel>(kernel);
    if (x.size() != g.scales.size())
      throw std::invalid_argument("dataset/privacy length mismatch");
    out = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (g.combo[i] == 0.0) continue;
      double y = x[i];
      if (g.scales[i] > 0.0) y += sample_laplace(g.scales[i], rng);
      out += g.combo[i] * y;
    }
  }
  return clamp ? std::clamp(out, -0.5, 0.5) : out;
}

template <class Rng>
double adpm_estimate(const PrivacyVector& eps, const BoundedDataset& x, Rng& rng) {
  MechanismSpec spec;
  spec.kind = MechanismKind::kAdpm;
  spec.levels = eps;
  return prepare_mechanism(spec)(x, rng);
}

template <class Rng>
double uni_estimate(double eps1, const BoundedDataset& x, Rng& rng) {
  if (!(eps1 > 0.0)) throw InfeasibleMechanism("uni requires a positive level");
  const std::size_t n = x.size();
  AffineKernel k;
  k.weights.assign(n, 1.0 / static_cast<double>(n));
  k.eta = std::isinf(eps1) ? 0.0 : 1.0 / (static_cast<double>(n) * eps1);
  PreparedMechanism mech{MechanismKind::kUni, false, std::move(k)};
  return mech(x, rng);
}

template <class Rng>
double sm_estimate(const PrivacyVector& eps, const BoundedDataset& x, Rng& rng) {
  MechanismSpec spec;
  spec.kind = MechanismKind::kSm;
  spec.levels = eps;
  return prepare_mechanism(spec)(x, rng);
}

template <class Rng>
double propdpm_estimate(const PrivacyVector& eps, const BoundedDataset& x, Rng& rng) {
  MechanismSpec spec;
  spec.kind = MechanismKind::kPropDpm;
  spec.levels = eps;
  return prepare_mechanism(spec)(x, rng);
}

template <class Rng>
double ldpe_estimate(const TwoGroupProfile& profile, const BoundedDataset& x, Rng& rng) {
  MechanismSpec spec;
  spec.kind = MechanismKind::kLdpe;
  spec.profile = profile;
  return prepare_mechanism(spec)(x, rng);
}

template <class Rng>
double stretch_estimate(const PrivacyVector& eps, const BoundedDataset& x, Rng& rng) {
  MechanismSpec spec;
  spec.kind = MechanismKind::kStretch;
  spec.levels = eps;
  return prepare_mechanism(spec)(x, rng);
}

}  // namespace hdpmean
