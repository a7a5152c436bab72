#include "hdpmean/audit.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hdpmean/rng.hpp"

namespace hdpmean {

MechanismCertificate mechanism_certificate(const PreparedMechanism& mech,
                                           const PrivacyVector& declared) {
  MechanismCertificate cert;
  const std::size_t n = declared.size();
  cert.effective_levels.assign(n, 0.0);

  if (const auto* aff = std::get_if<AffineKernel>(&mech.kernel)) {
    if (aff->weights.size() != n)
      throw std::invalid_argument("certificate length mismatch");
    for (std::size_t i = 0; i < n; ++i)
      cert.effective_levels[i] = effective_level(aff->weights[i], aff->eta);
  } else if (std::get_if<ConstantKernel>(&mech.kernel)) {
    // Output ignores the data entirely.
  } else if (const auto* sm = std::get_if<SmKernel>(&mech.kernel)) {
    // Guarantee by the subsampling argument of the sampling mechanism's
    // source; not derivable from a single (w, eta) pair.
    if (sm->probs.size() != n)
      throw std::invalid_argument("certificate length mismatch");
    cert.analytic = false;
    for (std::size_t i = 0; i < n; ++i) cert.effective_levels[i] = declared[i];
  } else if (const auto* l = std::get_if<LdpeKernel>(&mech.kernel)) {
    if (l->n1 + l->n2 != n)
      throw std::invalid_argument("certificate length mismatch");
    const double w1 = l->c1 / static_cast<double>(l->n1);
    const double w2 = l->c2 / static_cast<double>(l->n2);
    const double s1 = l->c1 * l->scale1;  // group-1 noise as seen in the output
    const double s2 = l->c2 * l->scale2;
    for (std::size_t i = 0; i < n; ++i) {
      const bool g1 = i < l->n1;
      const double w = g1 ? w1 : w2;
      const double s = g1 ? s1 : s2;
      cert.effective_levels[i] = w == 0.0 ? 0.0 : (s > 0.0 ? w / s : kInf);
    }
  } else {
    const auto& g = std::get<LdpeGeneralKernel>(mech.kernel);
    if (g.combo.size() != n)
      throw std::invalid_argument("certificate length mismatch");
    for (std::size_t i = 0; i < n; ++i) {
      const double w = g.combo[i];
      const double s = g.combo[i] * g.scales[i];
      cert.effective_levels[i] = w == 0.0 ? 0.0 : (s > 0.0 ? w / s : kInf);
    }
  }

  constexpr double kRelTol = 1e-12;
  cert.satisfied.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    cert.satisfied.push_back(cert.effective_levels[i] <=
                             declared[i] * (1.0 + kRelTol));
  return cert;
}

std::vector<std::size_t> audit_classes(const MechanismCertificate& cert) {
  std::vector<std::size_t> users;
  std::map<double, std::size_t> seen;
  for (std::size_t i = 0; i < cert.effective_levels.size(); ++i)
    seen.emplace(cert.effective_levels[i], i);
  users.reserve(seen.size());
  for (const auto& [level, idx] : seen) users.push_back(idx);
  return users;
}

RatioAuditResult histogram_ratio_audit(const PreparedMechanism& mech,
                                       std::size_t n, std::size_t user,
                                       double effective_level, long draws,
                                       std::uint64_t seed, double bin_width) {
  RatioAuditResult res;
  res.user = user;
  res.effective_level = effective_level;
  res.draws = draws;
  if (std::isinf(effective_level)) return res;  // nothing to bound

  // Neighboring pair differing only at `user`, by the full domain range.
  std::vector<double> base(n, 0.0);
  base[user] = -0.5;
  const BoundedDataset x1{std::vector<double>(base)};
  base[user] = 0.5;
  const BoundedDataset x2{std::vector<double>(base)};

  const auto histogram = [&](const BoundedDataset& x, std::uint64_t stream) {
    std::map<long, long> bins;
    RandomStream rng = RandomStream::for_trial(seed, stream);
    for (long d = 0; d < draws; ++d) {
      const double y = mech(x, rng);
      ++bins[static_cast<long>(std::floor(y / bin_width))];
    }
    return bins;
  };
  const std::map<long, long> h1 = histogram(x1, 1);
  const std::map<long, long> h2 = histogram(x2, 2);

  const double ratio = std::exp(effective_level);
  const double nd = static_cast<double>(draws);
  // Bins with fewer than 25 counts on the heavy side are skipped: the normal
  // approximation behind the 4-sigma band needs that much mass.
  constexpr long kMinCount = 25;
  const auto check = [&](const std::map<long, long>& a,
                         const std::map<long, long>& b) {
    for (const auto& [bin, ca] : a) {
      if (ca < kMinCount) continue;
      const auto it = b.find(bin);
      const long cb = it == b.end() ? 0 : it->second;
      const double pa = static_cast<double>(ca) / nd;
      const double pb = static_cast<double>(cb) / nd;
      const double sigma = std::sqrt(pa * (1.0 - pa) / nd +
                                     ratio * ratio * pb * (1.0 - pb) / nd);
      const double excess = pa - ratio * pb;
      ++res.bins_checked;
      if (sigma > 0.0) res.max_z = std::max(res.max_z, excess / sigma);
      if (excess > 4.0 * sigma) res.passed = false;
    }
  };
  check(h1, h2);
  check(h2, h1);
  return res;
}

}  // namespace hdpmean
