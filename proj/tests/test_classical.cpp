#include <doctest.h>

#include <cmath>
#include <random>

#include "qgrem/classical.hpp"
#include "qgrem/errors.hpp"
#include "support.hpp"

using namespace qgrem;
using namespace qgrem::testing;

TEST_SUITE("classical") {
  TEST_CASE("single-level partial pressure on both sides of freezing") {
    const auto h = concave_hull(DistributionSpec::rem());
    const auto hot = partial_pressures(h, 1.0);
    REQUIRE(hot.size() == 1);
    CHECK_FALSE(hot[0].frozen);
    CHECK(hot[0].phi == doctest::Approx(kRemPhiBeta1).epsilon(1e-14));
    CHECK(hot[0].freezing_beta == doctest::Approx(kRemCriticalBeta).epsilon(1e-14));
    const auto cold = partial_pressures(h, 1.2);
    CHECK(cold[0].frozen);
    CHECK(cold[0].phi == doctest::Approx(kRemPhiBeta12).epsilon(1e-14));
  }

  TEST_CASE("two-level partial pressures") {
    const auto t = partial_pressures(concave_hull(grem2()), 1.2);
    REQUIRE(t.size() == 2);
    CHECK(t[0].frozen);
    CHECK_FALSE(t[1].frozen);
    CHECK(t[0].freezing_beta == doctest::Approx(kGremBeta1).epsilon(1e-13));
    CHECK(t[1].freezing_beta == doctest::Approx(kGremBeta2).epsilon(1e-13));
    CHECK(t[0].phi == doctest::Approx(kGremPhi1).epsilon(1e-14));
    CHECK(t[1].phi == doctest::Approx(kGremPhi2).epsilon(1e-14));
    CHECK(classical_pressure(concave_hull(grem2()), 1.2) == doctest::Approx(kGremClassical).epsilon(1e-14));
  }

  TEST_CASE("infinite temperature") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) CHECK(classical_pressure(concave_hull(random_step(rng)), 0.0) == doctest::Approx(kLn2));
  }

  TEST_CASE("freezing boundary") {
    CHECK(2 * kLn2 / 1.44 == doctest::Approx(kFreezeThreshold12).epsilon(1e-14));
    CHECK(freezing_boundary(concave_hull(DistributionSpec::rem()), 1.2) == 1.0);
    CHECK(freezing_boundary(concave_hull(DistributionSpec::rem()), 1.0) == 0.0);
    CHECK(freezing_boundary(concave_hull(grem2()), 1.2) == doctest::Approx(0.5));
    CHECK(freezing_boundary(concave_hull(grem2()), 0.0) == 0.0);
  }

  TEST_CASE("truncated pressure endpoints and single-level value") {
    const auto rem = concave_hull(DistributionSpec::rem());
    CHECK(crem_truncated_pressure(rem, 1.2, 0.0) == 0.0);
    CHECK(crem_truncated_pressure(rem, 1.2, 0.5) == doctest::Approx(kRemTruncatedHalf).epsilon(1e-14));
    CHECK_THROWS_AS(crem_truncated_pressure(rem, 1.2, 1.5), DomainError);
    CHECK_THROWS_AS(crem_truncated_pressure(rem, 1.2, -0.1), DomainError);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
      const auto h = concave_hull(i % 2 ? random_step(rng) : random_piecewise(rng));
      const double beta = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
      CHECK(crem_truncated_pressure(h, beta, h.end()) == doctest::Approx(classical_pressure(h, beta)).epsilon(1e-13));
    }
  }

  TEST_CASE("truncated pressure is the integral of the segment derivative") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 50; ++i) {
      const auto h = concave_hull(random_piecewise(rng, 10));
      const double beta = std::uniform_real_distribution<double>(0.2, 2.5)(rng);
      const auto d = segment_derivatives(h, beta);
      const auto t = partial_pressures(h, beta);
      for (std::size_t l = 0; l < h.size(); ++l) CHECK(d[l] == doctest::Approx(t[l].phi / h.lengths[l]).epsilon(1e-13));
      // Midpoint rule on the piecewise-constant derivative is exact up to cell boundaries.
      const int n = 20000;
      double acc = 0.0;
      for (int k = 0; k < n; ++k) {
        const double z = (k + 0.5) / n;
        std::size_t l = 0;
        while (l + 1 < h.size() && z >= h.support[l]) ++l;
        acc += d[l] / n;
        if ((k + 1) % 4000 == 0) {
          const double zz = static_cast<double>(k + 1) / n;
          CHECK(crem_truncated_pressure(h, beta, zz) == doctest::Approx(acc).epsilon(2e-4));
        }
      }
    }
  }

  TEST_CASE("truncated pressure is continuous, increasing and concave in z") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 50; ++i) {
      const auto h = concave_hull(random_step(rng));
      const double beta = std::uniform_real_distribution<double>(0.1, 3.0)(rng);
      double prev2 = 0.0, prev1 = crem_truncated_pressure(h, beta, 0.0);
      const int n = 400;
      for (int k = 1; k <= n; ++k) {
        const double v = crem_truncated_pressure(h, beta, static_cast<double>(k) / n);
        CHECK(v > prev1);
        CHECK(v - prev1 < 10.0 / n);
        if (k >= 2) CHECK(v - 2 * prev1 + prev2 <= 1e-12);
        prev2 = prev1;
        prev1 = v;
      }
    }
  }

  TEST_CASE("segment derivatives strictly decrease") {
    std::mt19937_64 rng(10);
    for (int i = 0; i < 1000; ++i) {
      const auto h = concave_hull(random_step(rng));
      const double beta = std::uniform_real_distribution<double>(0.05, 4.0)(rng);
      const auto d = segment_derivatives(h, beta);
      for (std::size_t l = 1; l < d.size(); ++l) CHECK(d[l] < d[l - 1]);
    }
  }
}
