#include "hdpmean/simulate.hpp"

#include <cmath>
#include <thread>
#include <vector>

#include "hdpmean/rng.hpp"

namespace hdpmean {

namespace {

// Fills sq_err[t] for t in [begin, end); each trial has its own substream so
// chunk boundaries and thread count cannot change any value.
void run_chunk(const PreparedMechanism& mech, std::size_t n,
               const DistributionSpec& dist, double true_mean,
               std::uint64_t seed, long begin, long end,
               std::vector<double>& sq_err) {
  for (long t = begin; t < end; ++t) {
    RandomStream rng = RandomStream::for_trial(seed, static_cast<std::uint64_t>(t));
    const BoundedDataset x = sample_dataset(dist, n, rng);
    const double est = mech(x, rng);
    const double err = est - true_mean;
    sq_err[static_cast<std::size_t>(t)] = err * err;
  }
}

}  // namespace

SimResult estimate_mse_prepared(const PreparedMechanism& mech, std::size_t n,
                                const DistributionSpec& dist, long trials,
                                std::uint64_t seed, int threads) {
  if (trials < 100) throw std::invalid_argument("need at least 100 trials");
  SimResult res;
  res.trials = trials;
  res.seed = seed;
  res.analytic_ref = analytic_mse(mech, dist.true_variance(), dist.true_mean());

  std::vector<double> sq_err(static_cast<std::size_t>(trials));
  const double mu = dist.true_mean();
  const int workers = std::max(1, threads);
  if (workers == 1) {
    run_chunk(mech, n, dist, mu, seed, 0, trials, sq_err);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const long chunk = (trials + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const long begin = w * chunk;
      const long end = std::min(trials, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(run_chunk, std::cref(mech), n, std::cref(dist), mu, seed,
                        begin, end, std::ref(sq_err));
    }
    for (auto& th : pool) th.join();
  }

  // Fixed-order extended-precision reduction keeps results bit-identical
  // across thread counts.
  long double sum = 0.0L, sum_sq = 0.0L;
  for (double v : sq_err) {
    sum += v;
    sum_sq += static_cast<long double>(v) * v;
  }
  const long double mean = sum / trials;
  const long double var =
      std::max(0.0L, sum_sq / trials - mean * mean) *
      (static_cast<long double>(trials) / std::max<long>(trials - 1, 1));
  res.mse = static_cast<double>(mean);
  res.std_error = static_cast<double>(std::sqrt(var / trials));
  return res;
}

SimResult estimate_mse(const MechanismSpec& spec, const DistributionSpec& dist,
                       long trials, std::uint64_t seed, int threads) {
  double realized_f = 0.0;
  std::size_t n = 0;
  if (spec.profile) {
    const auto [n1, n2] = rounded_group_sizes(*spec.profile);
    realized_f = static_cast<double>(n1) / static_cast<double>(spec.profile->n);
    n = static_cast<std::size_t>(n1 + n2);
  } else {
    n = spec.levels->size();
  }

  PreparedMechanism mech;
  try {
    mech = prepare_mechanism(spec);
  } catch (const InfeasibleMechanism& e) {
    SimResult res;
    res.trials = trials;
    res.seed = seed;
    res.infeasible = true;
    res.reason = e.what();
    res.mse = kInf;
    res.analytic_ref.infeasible = true;
    res.analytic_ref.reason = e.what();
    res.realized_f = realized_f;
    return res;
  }

  SimResult res = estimate_mse_prepared(mech, n, dist, trials, seed, threads);
  res.realized_f = realized_f;
  return res;
}

}  // namespace hdpmean
