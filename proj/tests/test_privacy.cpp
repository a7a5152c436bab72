#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "hdpmean/privacy.hpp"
#include "hdpmean/rng.hpp"
#include "hdpmean/weights.hpp"
#include "support/scripted_stream.hpp"

using namespace hdpmean;
using hdpmean::testing::ScriptedStream;

TEST_CASE("privacy vector invariants") {
  CHECK_THROWS_AS(PrivacyVector({}), std::invalid_argument);
  CHECK_THROWS_AS(PrivacyVector({-0.1}), std::invalid_argument);
  const PrivacyVector eps({0.1, kInf});
  CHECK(eps.min_level() == 0.1);
  CHECK(std::isinf(eps.max_level()));
}

TEST_CASE("bounded dataset rejects out-of-domain values") {
  CHECK_THROWS_AS(BoundedDataset({0.6}), std::invalid_argument);
  CHECK_THROWS_AS(BoundedDataset({-0.50001}), std::invalid_argument);
  CHECK_NOTHROW(BoundedDataset({-0.5, 0.5, 0.0}));
}

TEST_CASE("affine release examples") {
  ScriptedStream zero_noise{0.5};
  const BoundedDataset a({0.5, -0.5});
  const std::vector<double> wa = {0.5, 0.5};
  CHECK(affine_release(a, wa, 1.0, zero_noise) == 0.0);

  // mean of all 0.5 plus a noise draw of 0.1: quantile(eta=1, u) = 0.1 at
  // u = 1 - exp(-0.1)/2
  ScriptedStream noise_01{1.0 - std::exp(-0.1) / 2.0};
  const BoundedDataset b({0.5, 0.5, 0.5});
  const std::vector<double> wb = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  CHECK(affine_release(b, wb, 1.0, noise_01) == doctest::Approx(0.6).epsilon(1e-12));

  ScriptedStream noise_m005{std::exp(-0.05) / 2.0};  // quantile = -0.05
  const BoundedDataset c({0.2, -0.4});
  const std::vector<double> wc = {0.8, 0.2};
  CHECK(affine_release(c, wc, 1.0, noise_m005) ==
        doctest::Approx(0.03).epsilon(1e-12));
}

TEST_CASE("affine release rejects length mismatch") {
  ScriptedStream s{0.5};
  const BoundedDataset x({0.1, 0.2, 0.3});
  const std::vector<double> w = {0.5, 0.5};
  CHECK_THROWS_AS(affine_release(x, w, 1.0, s), std::invalid_argument);
}

TEST_CASE("dp certificate examples") {
  const std::vector<double> w = {0.5, 0.5};
  const DpCertificate cert = dp_certificate(w, 0.5, PrivacyVector({1.0, 1.0}));
  CHECK(cert.effective_levels[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cert.effective_levels[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cert.all_satisfied());

  // regime-A weights: each user's effective level equals its declared level
  const std::vector<double> wa = {8.0e-4, 1.2e-3};
  const DpCertificate ca = dp_certificate(wa, 8.0e-3, PrivacyVector({0.1, 0.15}));
  CHECK(ca.effective_levels[0] == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(ca.effective_levels[1] == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(ca.all_satisfied());
}

TEST_CASE("saturated weights grant the capped level for free") {
  // group 2 declared 1.0 but receives only R*eps1 of actual exposure
  const TwoGroupProfile p(0.1, 1.0, 1000, 0.7);
  const TwoGroupSolution s = solve_two_group(p);
  const std::vector<double> w = {s.w1, s.w2};
  const DpCertificate cert = dp_certificate(w, s.eta, PrivacyVector({0.1, 1.0}));
  CHECK(cert.effective_levels[1] ==
        doctest::Approx(0.2142857142857143).epsilon(1e-12));
  CHECK(cert.effective_levels[1] < 1.0);
  CHECK(cert.all_satisfied());
}

TEST_CASE("degenerate mechanism certificate is all zeros") {
  const std::vector<double> w = {0.0, 0.0, 0.0};
  const DpCertificate cert = dp_certificate(w, 1.0, PrivacyVector({0.0, 0.1, 1.0}));
  for (double e : cert.effective_levels) CHECK(e == 0.0);
  CHECK(cert.all_satisfied());
}

TEST_CASE("worst-case density ratio of the affine release equals exp(w_i/eta)") {
  // Laplace densities centered at <w,x> and <w,x'>: sup-ratio over outputs is
  // exp(|shift|/eta) with shift = w_i * (domain range) = w_i.
  const double w_i = 0.3, eta = 0.25;
  const double c1 = -0.5 * w_i, c2 = 0.5 * w_i;
  const auto density = [&](double y, double c) {
    return std::exp(-std::abs(y - c) / eta) / (2.0 * eta);
  };
  double sup_ratio = 0.0;
  for (double y = -3.0; y <= 3.0; y += 1e-3)
    sup_ratio = std::max(sup_ratio, density(y, c1) / density(y, c2));
  CHECK(sup_ratio == doctest::Approx(std::exp(w_i / eta)).epsilon(1e-9));

  const DpCertificate cert =
      dp_certificate(std::vector<double>{w_i}, eta, PrivacyVector({kInf}));
  CHECK(cert.effective_levels[0] == doctest::Approx(w_i / eta).epsilon(1e-15));
}

TEST_CASE("two-sided dp implication bounds stay consistent on a grid") {
  // For any mechanism value lambda = P(M(x') in S), the implied interval for
  // P(M(x) in S) is nonempty and every point of it stays within 1 - e^-eps
  // of lambda. The one-sided simplification e^-eps*lambda >= 1-e^eps+e^eps*lambda
  // holds exactly on lambda <= 1/(1+e^-eps).
  for (double eps : {0.0, 0.05, 0.3, 1.0, 3.0, 10.0}) {
    for (double lam = 0.0; lam <= 1.0; lam += 1.0 / 64) {
      const double lower = std::max(std::exp(-eps) * lam,
                                    1.0 - std::exp(eps) + std::exp(eps) * lam);
      const double upper = std::min(std::exp(eps) * lam,
                                    1.0 - std::exp(-eps) + std::exp(-eps) * lam);
      CHECK(lower <= upper + 1e-12);
      CHECK(std::abs(std::clamp(lower, 0.0, 1.0) - lam) <=
            1.0 - std::exp(-eps) + 1e-12);
      CHECK(std::abs(std::clamp(upper, 0.0, 1.0) - lam) <=
            1.0 - std::exp(-eps) + 1e-12);
      if (lam * (1.0 + std::exp(-eps)) <= 1.0) {
        CHECK(std::exp(-eps) * lam >=
              1.0 - std::exp(eps) + std::exp(eps) * lam - 1e-12);
      }
    }
  }
  // The unrestricted form of the simplification fails at lambda = 1, eps > 0;
  // the final bounds above are unaffected.
  CHECK(std::exp(-1.0) * 1.0 < 1.0 - std::exp(1.0) + std::exp(1.0) * 1.0);
}

TEST_CASE("empirical histogram ratio respects exp(w_i/eta) within 4 sigma") {
  // Neighboring datasets differing in coordinate 0 by the full range.
  const std::vector<double> w = {0.4, 0.6};
  const double eta = 0.5;
  const double eff = w[0] / eta;
  const BoundedDataset x1({-0.5, 0.25});
  const BoundedDataset x2({+0.5, 0.25});
  const long draws = 1000000;
  const double bin = 0.05;

  std::map<long, long> h1, h2;
  RandomStream r1 = RandomStream::for_trial(99, 1);
  RandomStream r2 = RandomStream::for_trial(99, 2);
  for (long i = 0; i < draws; ++i) {
    ++h1[static_cast<long>(std::floor(affine_release(x1, w, eta, r1) / bin))];
    ++h2[static_cast<long>(std::floor(affine_release(x2, w, eta, r2) / bin))];
  }
  const double ratio = std::exp(eff);
  const auto check_direction = [&](const std::map<long, long>& a,
                                   const std::map<long, long>& b) {
    for (const auto& [bin_idx, ca] : a) {
      if (ca < 25) continue;
      const auto it = b.find(bin_idx);
      const double pa = static_cast<double>(ca) / draws;
      const double pb = it == b.end() ? 0.0 : static_cast<double>(it->second) / draws;
      const double sigma = std::sqrt(pa * (1 - pa) / draws +
                                     ratio * ratio * pb * (1 - pb) / draws);
      CHECK(pa - ratio * pb <= 4.0 * sigma);
    }
  };
  check_direction(h1, h2);
  check_direction(h2, h1);
}
