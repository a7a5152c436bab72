#include "hdpmean/experiments.hpp"

#include <cmath>

namespace hdpmean {

namespace {

MechanismSpec spec_for(MechanismKind kind, const TwoGroupProfile& profile) {
  MechanismSpec spec;
  spec.kind = kind;
  spec.profile = profile;
  return spec;
}

}  // namespace

std::vector<SweepNRow> sweep_n(double eps1, double eps2, double f,
                               const DistributionSpec& dist,
                               std::span<const long> n_values,
                               std::span<const MechanismKind> mechanisms,
                               long trials, std::uint64_t seed, int threads) {
  for (long n : n_values) {
    const double mass = static_cast<double>(n) * f;
    if (std::abs(mass - std::round(mass)) > 1e-9)
      throw std::invalid_argument("n*f must be integral for the n sweep (n=" +
                                  std::to_string(n) + ")");
  }
  std::vector<SweepNRow> rows;
  std::uint64_t tag = 0;
  for (long n : n_values) {
    const TwoGroupProfile profile(eps1, eps2, n, f);
    const double upper = upper_bound(profile);
    for (MechanismKind kind : mechanisms) {
      const std::uint64_t row_seed = derive_seed(seed, tag++);
      const SimResult sim =
          estimate_mse(spec_for(kind, profile), dist, trials, row_seed, threads);
      SweepNRow row;
      row.mechanism = mechanism_name(kind);
      row.n = n;
      row.eps1 = profile.eps1;
      row.eps2 = profile.eps2;
      row.f = profile.f;
      row.realized_f = sim.realized_f;
      row.trials = trials;
      row.seed = row_seed;
      row.mse = sim.mse;
      row.std_error = sim.std_error;
      row.transform = (sim.mse - 1.0 / (12.0 * static_cast<double>(n))) *
                      static_cast<double>(n) * static_cast<double>(n);
      row.analytic_total = sim.analytic_ref.total();
      row.upper = upper;
      row.infeasible = sim.infeasible;
      row.reason = sim.reason;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<SweepEps2Row> sweep_eps2(double eps1, long n, double f,
                                     const DistributionSpec& dist,
                                     std::span<const double> eps2_values,
                                     std::span<const MechanismKind> mechanisms,
                                     long trials, std::uint64_t seed,
                                     int threads) {
  std::vector<SweepEps2Row> rows;
  std::uint64_t tag = 0;
  for (double eps2 : eps2_values) {
    const TwoGroupProfile profile(eps1, eps2, n, f);
    const double upper = upper_bound(profile);
    const double sat = saturation_eps2(profile);
    const TwoGroupSolution tg = solve_two_group(profile);
    for (MechanismKind kind : mechanisms) {
      const std::uint64_t row_seed = derive_seed(seed, tag++);
      const SimResult sim =
          estimate_mse(spec_for(kind, profile), dist, trials, row_seed, threads);
      SweepEps2Row row;
      row.mechanism = mechanism_name(kind);
      row.eps2 = profile.eps2;
      row.eps1 = profile.eps1;
      row.f = profile.f;
      row.realized_f = sim.realized_f;
      row.n = n;
      row.trials = trials;
      row.seed = row_seed;
      row.mse = sim.mse;
      row.std_error = sim.std_error;
      row.mse_x1e4 = sim.mse * 1e4;
      row.analytic_total = sim.analytic_ref.total();
      row.upper = upper;
      row.saturation_eps2 = sat;
      row.weight_ratio = tg.weight_ratio();
      row.infeasible = sim.infeasible;
      row.reason = sim.reason;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<WeightRatioRow> weight_ratio_sweep(double eps1, long n, double f,
                                               std::span<const double> eps2_values) {
  std::vector<WeightRatioRow> rows;
  rows.reserve(eps2_values.size());
  for (double eps2 : eps2_values) {
    const TwoGroupProfile profile(eps1, eps2, n, f);
    WeightRatioRow row;
    row.eps2 = profile.eps2;
    row.r = profile.r();
    row.saturation_ratio = saturation_ratio(profile);
    row.ratio = solve_two_group(profile).weight_ratio();
    rows.push_back(row);
  }
  return rows;
}

Table2Result table2_experiment(long n, std::pair<double, double> low_range,
                               std::pair<double, double> high_range, long trials,
                               std::uint64_t seed, int threads) {
  Table2Result out;
  const auto draw_levels = [&](std::pair<double, double> range,
                               std::uint64_t tag) {
    RandomStream rng(derive_seed(seed, tag));
    std::vector<double> levels(static_cast<std::size_t>(n));
    for (auto& e : levels)
      e = std::exp(range.first + (range.second - range.first) * rng.uniform01());
    return levels;
  };
  out.eps_low = draw_levels(low_range, 101);
  out.eps_high = draw_levels(high_range, 102);

  const DistributionSpec dist = DistributionSpec::beta23_shifted();
  const MechanismKind kinds[] = {MechanismKind::kAdpm,   MechanismKind::kPropDpm,
                                 MechanismKind::kLdpe,   MechanismKind::kSm,
                                 MechanismKind::kUni,    MechanismKind::kStretch};

  std::uint64_t tag = 0;
  for (const auto& [regime, levels] :
       {std::pair{std::string("high"), &out.eps_high},
        std::pair{std::string("low"), &out.eps_low}}) {
    const PrivacyVector eps(*levels);
    for (MechanismKind kind : kinds) {
      Table2Row row;
      row.regime = regime;
      row.mechanism = mechanism_name(kind);
      const std::uint64_t row_seed = derive_seed(seed, 200 + tag++);
      try {
        PreparedMechanism mech;
        if (kind == MechanismKind::kLdpe) {
          // No two-group structure here; fall back to per-user local
          // estimates with inverse-proxy combination.
          mech = prepare_ldpe_general(eps);
        } else {
          MechanismSpec spec;
          spec.kind = kind;
          spec.levels = eps;
          mech = prepare_mechanism(spec);
        }
        const SimResult sim = estimate_mse_prepared(
            mech, eps.size(), dist, trials, row_seed, threads);
        row.mse = sim.mse;
        row.std_error = sim.std_error;
        row.ln_mse = std::log(sim.mse);
        row.analytic_total = sim.analytic_ref.total();
      } catch (const InfeasibleMechanism& e) {
        row.infeasible = true;
        row.reason = e.what();
        row.mse = kInf;
        row.ln_mse = kInf;
      }
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

}  // namespace hdpmean
