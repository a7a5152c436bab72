#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hdpmean/estimators.hpp"

namespace hdpmean {

/// Per-user DP certificate for a whole mechanism. `analytic` marks levels
/// derived from the mechanism's own noise structure; SM's guarantee rests on
/// the subsampling argument and is reported at the declared levels instead.
struct MechanismCertificate {
  std::vector<double> effective_levels;
  std::vector<bool> satisfied;
  bool analytic = true;

  bool all_satisfied() const {
    for (bool b : satisfied)
      if (!b) return false;
    return true;
  }
};

MechanismCertificate mechanism_certificate(const PreparedMechanism& mech,
                                           const PrivacyVector& declared);

/// Result of the empirical neighboring-dataset histogram ratio test for one
/// user index: outputs are binned at fixed width and each bin's frequency is
/// required to stay below exp(eff) times the neighbor's frequency plus a
/// 4-sigma binomial allowance, in both directions.
struct RatioAuditResult {
  std::size_t user = 0;
  double effective_level = 0.0;
  double max_z = 0.0;     // worst standardized exceedance observed
  long bins_checked = 0;
  long draws = 0;
  bool passed = true;
};

RatioAuditResult histogram_ratio_audit(const PreparedMechanism& mech,
                                       std::size_t n, std::size_t user,
                                       double effective_level, long draws,
                                       std::uint64_t seed,
                                       double bin_width = 0.05);

/// Representative user indices: one per distinct effective level (for a
/// two-group layout that is two users).
std::vector<std::size_t> audit_classes(const MechanismCertificate& cert);

}  // namespace hdpmean
