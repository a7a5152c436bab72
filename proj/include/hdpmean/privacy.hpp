#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hdpmean/laplace.hpp"

namespace hdpmean {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Per-user privacy levels. Level i bounds the output density ratio between
/// datasets differing only in user i's value by exp(levels[i]). +inf marks a
/// public user.
class PrivacyVector {
 public:
  explicit PrivacyVector(std::vector<double> levels) : levels_(std::move(levels)) {
    if (levels_.empty()) throw std::invalid_argument("privacy vector must be nonempty");
    for (double e : levels_) {
      if (std::isnan(e) || e < 0.0)
        throw std::invalid_argument("privacy levels must be >= 0");
    }
  }

  std::size_t size() const { return levels_.size(); }
  double operator[](std::size_t i) const { return levels_[i]; }
  const std::vector<double>& levels() const { return levels_; }

  double min_level() const { return *std::min_element(levels_.begin(), levels_.end()); }
  double max_level() const { return *std::max_element(levels_.begin(), levels_.end()); }
  double l1_norm() const {
    double s = 0.0;
    for (double e : levels_) s += e;
    return s;
  }

 private:
  std::vector<double> levels_;
};

/// Data values over the bounded domain [-0.5, 0.5].
class BoundedDataset {
 public:
  explicit BoundedDataset(std::vector<double> values) : values_(std::move(values)) {
    for (double x : values_) {
      if (!(x >= -0.5 && x <= 0.5))
        throw std::invalid_argument("data values must lie in [-0.5, 0.5]");
    }
  }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

/// Per-user privacy actually granted by an affine release: effective level
/// w_i/eta, compared against the declared level.
struct DpCertificate {
  std::vector<double> effective_levels;
  std::vector<bool> satisfied;

  bool all_satisfied() const {
    return std::all_of(satisfied.begin(), satisfied.end(), [](bool b) { return b; });
  }
};

/// One draw of <w, x> + Laplace(eta). eta == 0 is accepted and adds no noise;
/// it arises only when all weighted users are public. No output clipping by
/// default (see affine mechanisms for the optional clamp).
template <class Rng>
double affine_release(const BoundedDataset& x, std::span<const double> w,
                      double eta, Rng& rng) {
  if (w.size() != x.size())
    throw std::invalid_argument("weight/data length mismatch");
  if (!(eta >= 0.0)) throw std::domain_error("noise scale must be >= 0");
  double dot = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] < 0.0) throw std::invalid_argument("weights must be >= 0");
    dot += w[i] * x[i];
  }
  return eta > 0.0 ? dot + sample_laplace(eta, rng) : dot;
}

/// Effective level of user i under an affine release with weight w_i and
/// Laplace scale eta. Worst-case density ratio over neighboring datasets is
/// exactly exp(w_i / eta) since the domain has unit range.
inline double effective_level(double weight, double eta) {
  if (weight == 0.0) return 0.0;  // output independent of this user
  return eta > 0.0 ? weight / eta : kInf;
}

inline DpCertificate dp_certificate(std::span<const double> w, double eta,
                                    const PrivacyVector& declared) {
  if (w.size() != declared.size())
    throw std::invalid_argument("weight/privacy length mismatch");
  if (!(eta >= 0.0)) throw std::domain_error("noise scale must be >= 0");
  DpCertificate cert;
  cert.effective_levels.reserve(w.size());
  cert.satisfied.reserve(w.size());
  constexpr double kRelTol = 1e-12;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double eff = effective_level(w[i], eta);
    cert.effective_levels.push_back(eff);
    cert.satisfied.push_back(eff <= declared[i] * (1.0 + kRelTol));
  }
  return cert;
}

}  // namespace hdpmean
