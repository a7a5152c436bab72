#include <doctest.h>

#include <cmath>
#include <vector>

#include "hdpmean/optimize.hpp"
#include "hdpmean/rng.hpp"
#include "hdpmean/weights.hpp"
#include "support/oracle.hpp"

using namespace hdpmean;
using hdpmean::testing::oracle_solve;

namespace {

PrivacyVector expand(const TwoGroupProfile& p) { return two_group_levels(p); }

}  // namespace

TEST_CASE("golden section finds quadratic minima") {
  // localization by value comparisons bottoms out near sqrt(ulp), so the
  // argmin is only good to ~1e-8 even though the bracket shrinks further
  const auto q = [](double x) { return (x - 1.3) * (x - 1.3) + 0.25; };
  const double m = golden_section_minimize(q, -4.0, 5.0, 1e-12);
  CHECK(std::abs(m - 1.3) <= 2e-7);
  CHECK(q(m) <= 0.25 + 1e-13);
  // endpoint minimum is returned exactly
  const auto inc = [](double x) { return x; };
  CHECK(golden_section_minimize(inc, 2.0, 9.0, 1e-12) == 2.0);
}

TEST_CASE("profile normalizes group order and validates") {
  const TwoGroupProfile p(0.5, 0.1, 100, 0.25);
  CHECK(p.eps1 == 0.1);
  CHECK(p.eps2 == 0.5);
  CHECK(p.f == 0.75);
  CHECK_THROWS_AS(TwoGroupProfile(0.1, 0.2, 0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(TwoGroupProfile(0.1, 0.2, 10, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(TwoGroupProfile(-0.1, 0.2, 10, 0.5), std::invalid_argument);
}

TEST_CASE("saturation ratio examples") {
  CHECK(saturation_ratio(TwoGroupProfile(0.1, 1.0, 1000, 0.7)) ==
        doctest::Approx(1.0 + 8.0 / 7.0).epsilon(1e-14));
  CHECK(saturation_eps2(TwoGroupProfile(0.1, 1.0, 1000, 0.7)) ==
        doctest::Approx(0.2142857142857143).epsilon(1e-12));
  CHECK(saturation_ratio(TwoGroupProfile(0.01, 0.02, 80000, 0.5)) ==
        doctest::Approx(3.0).epsilon(1e-12));
  // degenerate group: threshold never reached by finite eps2
  CHECK(std::isinf(saturation_ratio(TwoGroupProfile(0.0, 1.0, 100, 0.5))));
  CHECK(std::isinf(saturation_ratio(TwoGroupProfile(0.1, 1.0, 100, 0.0))));
  CHECK(TwoGroupProfile(0.0, 1.0, 100, 0.5).degenerate_group());
  // n*f -> infinity sends R -> 1
  CHECK(saturation_ratio(TwoGroupProfile(0.1, 1.0, 2000000000L, 1.0)) ==
        doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("two-group closed form: homogeneous case") {
  const TwoGroupSolution s = solve_two_group(TwoGroupProfile(0.2, 0.2, 50, 0.3));
  CHECK(s.w1 == doctest::Approx(1.0 / 50).epsilon(1e-15));
  CHECK(s.w2 == doctest::Approx(1.0 / 50).epsilon(1e-15));
  CHECK(s.eta == doctest::Approx(1.0 / (50 * 0.2)).epsilon(1e-15));
}

TEST_CASE("two-group closed form: proportional regime") {
  const TwoGroupProfile p(0.1, 0.15, 1000, 0.5);
  const TwoGroupSolution s = solve_two_group(p);
  CHECK(s.regime == Regime::kA);
  CHECK(s.w1 == doctest::Approx(8.0e-4).epsilon(1e-12));
  CHECK(s.w2 == doctest::Approx(1.2e-3).epsilon(1e-12));
  CHECK(s.eta == doctest::Approx(8.0e-3).epsilon(1e-12));
  CHECK(!s.degenerate);
  CHECK(s.objective == doctest::Approx(3.88e-4).epsilon(1e-12));
}

TEST_CASE("two-group closed form: saturated regime") {
  const TwoGroupProfile p(0.1, 1.0, 1000, 0.7);
  const TwoGroupSolution s = solve_two_group(p);
  CHECK(s.regime == Regime::kB);
  CHECK(s.w1 == doctest::Approx(7.446808510638298e-4).epsilon(1e-12));
  CHECK(s.w2 == doctest::Approx(1.5957446808510637e-3).epsilon(1e-12));
  // group masses satisfy the constraint f*w1 + (1-f)*w2 = 1/n
  CHECK(0.7 * s.w1 + 0.3 * s.w2 == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(s.eta == doctest::Approx(s.w1 / 0.1).epsilon(1e-14));
}

TEST_CASE("weight ratio law and saturation bit-identity") {
  const double eps1 = 0.1;
  const long n = 1000;
  const double f = 0.7;
  const double sat = saturation_eps2(TwoGroupProfile(eps1, 1.0, n, f));

  for (double eps2 : {0.11, 0.15, 0.2, sat, 0.5, 3.0}) {
    const TwoGroupProfile p(eps1, eps2, n, f);
    const TwoGroupSolution s = solve_two_group(p);
    const double expected = std::min(p.r(), saturation_ratio(p));
    CHECK(s.weight_ratio() == doctest::Approx(expected).epsilon(1e-12));
  }

  const TwoGroupSolution base = solve_two_group(TwoGroupProfile(eps1, sat, n, f));
  for (double eps2 : {2.0 * sat, 10.0 * sat, kInf}) {
    const TwoGroupSolution s = solve_two_group(TwoGroupProfile(eps1, eps2, n, f));
    CHECK(s.w1 == base.w1);  // bit-identical: the formulas contain no eps2
    CHECK(s.w2 == base.w2);
    CHECK(s.eta == base.eta);
    CHECK(s.objective == base.objective);
  }
}

TEST_CASE("regimes join continuously at r == R") {
  for (const auto& [eps1, n, f] :
       std::vector<std::tuple<double, long, double>>{{0.1, 1000, 0.7},
                                                     {0.05, 400, 0.25},
                                                     {1.0, 50, 0.9}}) {
    const double sat = saturation_eps2(TwoGroupProfile(eps1, eps1, n, f));
    const TwoGroupProfile p(eps1, sat, n, f);
    // regime-B formulas apply at the boundary; compare against the
    // proportional form evaluated by hand
    const TwoGroupSolution s = solve_two_group(p);
    const double ebar = p.eps_bar();
    CHECK(s.w1 == doctest::Approx(eps1 / (n * ebar)).epsilon(1e-12));
    CHECK(s.w2 == doctest::Approx(sat / (n * ebar)).epsilon(1e-12));
    CHECK(s.eta == doctest::Approx(1.0 / (n * ebar)).epsilon(1e-12));
  }
}

TEST_CASE("degenerate branch for hopeless budgets") {
  // n=1, eps=0.01: objective = 1/4 + 2*10^4 > 1/4
  const TwoGroupSolution s = solve_two_group(TwoGroupProfile(0.01, 0.01, 1, 1.0));
  CHECK(s.degenerate);
  CHECK(s.objective == doctest::Approx(0.25 + 2.0e4).epsilon(1e-12));

  const WeightSolution g = solve_general(PrivacyVector({0.01}));
  CHECK(g.degenerate);
  CHECK(g.objective == doctest::Approx(0.25 + 2.0e4).epsilon(1e-12));
}

TEST_CASE("capped simplex projection examples") {
  // no cap binds
  const auto w1 = project_capped_simplex(PrivacyVector({2.0, 2.0, 2.0}), 100.0);
  for (double w : w1) CHECK(w == doctest::Approx(1.0 / 3).epsilon(1e-15));

  // caps (0.2, 0.2, 2.0): first two saturate, rest takes the remainder
  const auto w2 = project_capped_simplex(PrivacyVector({1.0, 1.0, 10.0}), 0.2);
  CHECK(w2[0] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(w2[1] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(w2[2] == doctest::Approx(0.6).epsilon(1e-15));

  // feasibility boundary: all caps tight
  const PrivacyVector eps({0.5, 1.0, 1.5});
  const double eta = 1.0 / eps.l1_norm();
  const auto w3 = project_capped_simplex(eps, eta);
  for (int i = 0; i < 3; ++i)
    CHECK(w3[i] == doctest::Approx(eps[i] / eps.l1_norm()).epsilon(1e-12));

  CHECK_THROWS_AS(project_capped_simplex(eps, 0.9 / eps.l1_norm()),
                  std::domain_error);
}

TEST_CASE("water-filling treats equal levels as a block") {
  const auto w = project_capped_simplex(PrivacyVector({1.0, 1.0, 1.0, 9.0}), 0.21);
  CHECK(w[0] == w[1]);
  CHECK(w[1] == w[2]);
  CHECK(w[0] == doctest::Approx(0.21).epsilon(1e-15));
  CHECK(w[3] == doctest::Approx(1.0 - 3 * 0.21).epsilon(1e-12));
}

TEST_CASE("solve_general: homogeneous levels give uniform weights") {
  const WeightSolution s = solve_general(PrivacyVector(std::vector<double>(25, 0.4)));
  for (double w : s.weights) CHECK(w == doctest::Approx(1.0 / 25).epsilon(1e-10));
  CHECK(s.eta == doctest::Approx(1.0 / (25 * 0.4)).epsilon(1e-10));
}

TEST_CASE("solve_general matches the two-group closed form") {
  for (const auto& [eps1, eps2, n, f] :
       std::vector<std::tuple<double, double, long, double>>{
           {0.1, 0.15, 1000, 0.5},  // proportional regime
           {0.1, 1.0, 1000, 0.7},   // saturated regime
           {0.3, 0.9, 200, 0.4},
           {0.02, 5.0, 500, 0.9}}) {
    const TwoGroupProfile p(eps1, eps2, n, f);
    const TwoGroupSolution closed = solve_two_group(p);
    const WeightSolution general = solve_general(expand(p));
    CHECK(general.objective ==
          doctest::Approx(closed.objective).epsilon(1e-8));
  }
}

TEST_CASE("solve_general clips a single huge level") {
  std::vector<double> levels(100, 0.01);
  levels.back() = 100.0;
  const WeightSolution s = solve_general(PrivacyVector(levels));
  CHECK(s.weights.back() < 0.9);
  // proportional weighting would hand nearly everything to that user
  CHECK(100.0 / (99 * 0.01 + 100.0) > 0.99);
  // the same structure at oracle scale
  std::vector<double> small(50, 0.01);
  small.back() = 100.0;
  const WeightSolution g = solve_general(PrivacyVector(small));
  const WeightSolution oracle = oracle_solve(PrivacyVector(small), 20000);
  CHECK(g.objective == doctest::Approx(oracle.objective).epsilon(1e-8));
}

TEST_CASE("solve_general forces zero-level users to weight zero") {
  const WeightSolution s = solve_general(PrivacyVector({0.0, 0.2, 0.2}));
  CHECK(s.weights[0] == 0.0);
  CHECK(s.weights[1] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(s.weights[2] == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("solve_general with public users only is the plain mean") {
  const WeightSolution s = solve_general(PrivacyVector({kInf, kInf, kInf, kInf}));
  for (double w : s.weights) CHECK(w == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(s.eta == 0.0);
  CHECK(s.objective == doctest::Approx(1.0 / 16).epsilon(1e-15));
}

TEST_CASE("solve_general handles mixed finite and public users") {
  const PrivacyVector eps({0.5, 0.5, kInf, kInf});
  const WeightSolution s = solve_general(eps);
  double sum = 0.0;
  for (double w : s.weights) sum += w;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  const WeightSolution oracle = oracle_solve(eps, 20000);
  CHECK(s.objective == doctest::Approx(oracle.objective).epsilon(1e-8));
}

TEST_CASE("all-zero levels degenerate to the constant mechanism") {
  const WeightSolution s = solve_general(PrivacyVector({0.0, 0.0}));
  CHECK(s.degenerate);
  const TwoGroupSolution t = solve_two_group(TwoGroupProfile(0.0, 0.0, 10, 0.5));
  CHECK(t.degenerate);
}

TEST_CASE("simplex invariant holds across random instances") {
  RandomStream rng(314);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform01() * 20);
    std::vector<double> levels;
    for (int i = 0; i < n; ++i)
      levels.push_back(std::exp(std::log(0.01) +
                                rng.uniform01() * std::log(10.0 / 0.01)));
    const WeightSolution s = solve_general(PrivacyVector(levels));
    double sum = 0.0, eta = 0.0;
    for (std::size_t i = 0; i < s.weights.size(); ++i) {
      CHECK(s.weights[i] >= 0.0);
      sum += s.weights[i];
      eta = std::max(eta, s.weights[i] / levels[i]);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.eta == eta);  // exactly max_i w_i / eps_i
  }
}

TEST_CASE("solve_general agrees with the oracle on random instances") {
  RandomStream rng(2718);
  double worst = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform01() * 18);
    std::vector<double> levels;
    for (int i = 0; i < n; ++i)
      levels.push_back(std::exp(std::log(0.01) +
                                rng.uniform01() * std::log(10.0 / 0.01)));
    const PrivacyVector eps(levels);
    const WeightSolution s = solve_general(eps);
    const WeightSolution o = oracle_solve(eps, 20000);
    worst = std::max(worst, std::abs(s.objective - o.objective));
    CHECK(std::abs(s.objective - o.objective) <= 1e-6);
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("oracle recovers uniform weights on homogeneous levels") {
  const PrivacyVector eps(std::vector<double>(12, 0.3));
  const WeightSolution o = oracle_solve(eps, 20000);
  for (double w : o.weights) CHECK(w == doctest::Approx(1.0 / 12).epsilon(1e-9));
  CHECK(o.eta == doctest::Approx(1.0 / (12 * 0.3)).epsilon(1e-9));
}

TEST_CASE("two-group objective equals the pre-cap upper bound") {
  RandomStream rng(606);
  for (int i = 0; i < 200; ++i) {
    const long n = 5 + static_cast<long>(rng.uniform01() * 3000);
    const double f = 0.05 + 0.9 * rng.uniform01();
    const double eps1 =
        std::exp(std::log(0.005) + rng.uniform01() * std::log(2.0 / 0.005));
    const double eps2 = eps1 * std::exp(rng.uniform01() * std::log(50.0));
    const TwoGroupProfile p(eps1, eps2, n, f);
    const TwoGroupSolution s = solve_two_group(p);
    const double nn = static_cast<double>(n);
    double pre_min;
    if (s.regime == Regime::kA) {
      const double eb = p.eps_bar();
      pre_min = p.eps_sq_bar() / (4.0 * nn * eb * eb) + 2.0 / (nn * eb * nn * eb);
    } else {
      const double R = saturation_ratio(p);
      pre_min = R / (4.0 * nn * (p.f + (1.0 - p.f) * R));
    }
    CHECK(std::abs(s.objective - pre_min) <= 1e-12 * pre_min);
  }
}

TEST_CASE("oracle objective dominates feasible alternatives") {
  RandomStream rng(555);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> levels;
    for (int i = 0; i < 20; ++i)
      levels.push_back(std::exp(std::log(0.05) +
                                rng.uniform01() * std::log(5.0 / 0.05)));
    const PrivacyVector eps(levels);
    const WeightSolution o = oracle_solve(eps, 20000);

    // proportional point
    const double s = eps.l1_norm();
    double prop_obj = 0.0;
    for (double e : levels) prop_obj += (e / s) * (e / s);
    prop_obj = prop_obj / 4.0 + 2.0 / (s * s);
    CHECK(o.objective <= prop_obj + 1e-9);

    // uniform point
    const double eta_u = 1.0 / (20 * eps.min_level());
    const double uni_obj = 1.0 / (4.0 * 20) + 2.0 * eta_u * eta_u;
    CHECK(o.objective <= uni_obj + 1e-9);
  }
}

TEST_CASE("rounded group sizes and realized fraction") {
  const TwoGroupProfile p(0.1, 0.2, 10, 0.25);
  const auto [n1, n2] = rounded_group_sizes(p);
  CHECK(n1 == 3);  // lround(2.5) rounds half away from zero
  CHECK(n2 == 7);
  const PrivacyVector levels = two_group_levels(p);
  CHECK(levels.size() == 10);
  CHECK(levels[2] == 0.1);
  CHECK(levels[3] == 0.2);
}
