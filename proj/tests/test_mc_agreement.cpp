#include <doctest.h>

#include <cmath>
#include <vector>

#include "hdpmean/rng.hpp"
#include "hdpmean/simulate.hpp"

using namespace hdpmean;

namespace {

constexpr int kThreads = 4;

MechanismSpec spec_for(MechanismKind kind, const TwoGroupProfile& p) {
  MechanismSpec s;
  s.kind = kind;
  if (kind == MechanismKind::kLdpe)
    s.profile = p;
  else
    s.levels = two_group_levels(p);
  return s;
}

}  // namespace

TEST_CASE("monte carlo matches the closed forms for every mechanism") {
  // 2e5 trials per (mechanism, distribution); n = 400 keeps the run short
  // while leaving every mechanism non-degenerate.
  const TwoGroupProfile p(0.1, 0.3, 400, 0.5);
  const std::vector<DistributionSpec> dists = {
      DistributionSpec::uniform(), DistributionSpec::rademacher_half(),
      DistributionSpec::beta23_shifted()};
  const std::vector<MechanismKind> kinds = {
      MechanismKind::kAdpm, MechanismKind::kUni,     MechanismKind::kSm,
      MechanismKind::kPropDpm, MechanismKind::kLdpe, MechanismKind::kStretch};

  std::uint64_t tag = 0;
  for (const DistributionSpec& dist : dists) {
    for (MechanismKind kind : kinds) {
      const SimResult r = estimate_mse(spec_for(kind, p), dist, 200000,
                                       splitmix64(91 + tag++), kThreads);
      REQUIRE(!r.infeasible);
      const double ref = r.analytic_ref.total();
      INFO(mechanism_name(kind), " on ", dist.name(), ": mse=", r.mse,
           " ref=", ref, " se=", r.std_error);
      CHECK(std::abs(r.mse - ref) <= 3.0 * r.std_error);
    }
  }
}

TEST_CASE("unbiased mechanisms center on the true mean") {
  const TwoGroupProfile p(0.2, 0.5, 100, 0.5);
  const DistributionSpec dist = DistributionSpec::beta23_shifted();
  const long trials = 1000000;

  for (MechanismKind kind : {MechanismKind::kAdpm, MechanismKind::kUni,
                             MechanismKind::kPropDpm, MechanismKind::kLdpe}) {
    const PreparedMechanism mech = prepare_mechanism(spec_for(kind, p));
    long double sum = 0.0L, sum_sq = 0.0L;
    for (long t = 0; t < trials; ++t) {
      RandomStream rng = RandomStream::for_trial(777, static_cast<std::uint64_t>(t));
      const BoundedDataset x = sample_dataset(dist, 100, rng);
      const double est = mech(x, rng);
      sum += est;
      sum_sq += static_cast<long double>(est) * est;
    }
    const double mean = static_cast<double>(sum / trials);
    const double var = static_cast<double>(sum_sq / trials) - mean * mean;
    const double se = std::sqrt(var / trials);
    INFO(mechanism_name(kind), ": mean=", mean, " se=", se);
    CHECK(std::abs(mean - dist.true_mean()) <= 4.0 * se);
  }
}

TEST_CASE("sm agreement through the exact enumeration path") {
  const TwoGroupProfile p(0.1, 0.15, 30, 0.5);
  for (const DistributionSpec& dist :
       {DistributionSpec::uniform(), DistributionSpec::rademacher_half(),
        DistributionSpec::beta23_shifted()}) {
    const SimResult r = estimate_mse(spec_for(MechanismKind::kSm, p), dist,
                                     200000, 5150, kThreads);
    CHECK(!r.analytic_ref.approximate);
    CHECK(std::abs(r.mse - r.analytic_ref.total()) <= 3.0 * r.std_error);
  }
}
