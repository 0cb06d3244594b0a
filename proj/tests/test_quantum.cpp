#include <doctest.h>

#include <cmath>
#include <random>

#include "qgrem/classical.hpp"
#include "qgrem/errors.hpp"
#include "qgrem/quantum.hpp"
#include "support.hpp"

using namespace qgrem;
using namespace qgrem::testing;

namespace {

/// Brute-force sup over a fine z-grid plus support points.
double qcrem_grid_oracle(const ConcaveHull& h, double beta, double p) {
  double best = p;
  const int n = 4000;
  for (int k = 0; k <= n; ++k) {
    const double z = h.end() * k / n;
    best = std::max(best, crem_truncated_pressure(h, beta, z) + (1 - z) * p);
  }
  return best;
}

}  // namespace

TEST_SUITE("quantum") {
  TEST_CASE("two-level example at unit field") {
    const auto h = concave_hull(grem2());
    const auto r = qgrem_pressure(h, 1.2, ConstantField{1.0});
    CHECK(r.value == doctest::Approx(kGremQuantum).epsilon(1e-13));
    CHECK(r.argmax_index == 1);
    CHECK(r.argmax_point == doctest::Approx(0.5));
    REQUIRE(r.block_phases.size() == 2);
    CHECK(r.block_phases[0] == BlockPhase::Classical);
    CHECK(r.block_phases[1] == BlockPhase::Paramagnetic);
  }

  TEST_CASE("single-level example: classical branch wins") {
    const auto h = concave_hull(DistributionSpec::rem());
    CHECK(qgrem_pressure(h, 1.2, ConstantField{1.0}).value == doctest::Approx(kRemPhiBeta12).epsilon(1e-14));
  }

  TEST_CASE("zero field and zero temperature limits") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 200; ++i) {
      const auto h = concave_hull(random_step(rng));
      const double beta = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
      CHECK(qgrem_pressure(h, beta, ConstantField{0.0}).value == doctest::Approx(classical_pressure(h, beta)).epsilon(1e-13));
      CHECK(qgrem_pressure(h, 0.0, GaussianField{0.3, 1.0}).value == doctest::Approx(kLn2).epsilon(1e-13));
    }
  }

  TEST_CASE("critical fields") {
    const auto rem = concave_hull(DistributionSpec::rem());
    const auto g = qgrem_critical_fields(rem, 1.0);
    REQUIRE(g.size() == 1);
    CHECK(g[0] == doctest::Approx(kRemCriticalField).epsilon(1e-13));
    const auto g2 = qgrem_critical_fields(concave_hull(grem2()), 1.2);
    CHECK(g2[0] > g2[1]);
    CHECK_THROWS_AS(qgrem_critical_fields(rem, 0.0), DomainError);
  }

  TEST_CASE("phases switch at the critical fields") {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 200; ++i) {
      const auto h = concave_hull(random_step(rng));
      const double beta = std::uniform_real_distribution<double>(0.1, 3.0)(rng);
      const double gamma = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
      const auto r = qgrem_pressure(h, beta, ConstantField{gamma});
      const auto gc = qgrem_critical_fields(h, beta);
      for (std::size_t l = 0; l < h.size(); ++l) {
        if (std::abs(gamma - gc[l]) < 1e-9) continue;
        CHECK((r.block_phases[l] == BlockPhase::Paramagnetic) == (gamma > gc[l]));
      }
      CHECK(r.value == doctest::Approx(qgrem_indicator_pressure(h, beta, gamma)).epsilon(1e-12));
    }
  }

  TEST_CASE("pressure is nondecreasing in the field strength") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 100; ++i) {
      const auto h = concave_hull(random_step(rng));
      const double beta = std::uniform_real_distribution<double>(0.1, 3.0)(rng);
      double prev = -1.0;
      for (int k = 0; k <= 100; ++k) {
        const double v = qgrem_pressure(h, beta, ConstantField{0.04 * k}).value;
        CHECK(v >= prev - 1e-14);
        prev = v;
      }
    }
  }

  TEST_CASE("continuous-profile limit") {
    std::mt19937_64 rng(24);
    for (int i = 0; i < 100; ++i) {
      const auto spec = random_piecewise(rng, 10);
      const auto h = concave_hull(spec);
      const double beta = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
      const double gamma = std::uniform_real_distribution<double>(0.0, 2.5)(rng);
      const auto r = qcrem_pressure(h, beta, ConstantField{gamma});
      const double p = log_two_cosh(beta * gamma);
      CHECK(r.value >= classical_pressure(h, beta) - 1e-13);
      CHECK(r.value >= p - 1e-13);
      CHECK(r.value >= qcrem_grid_oracle(h, beta, p) - 1e-13);
      CHECK(r.value == doctest::Approx(qcrem_closed_form(h, beta, gamma)).epsilon(1e-10));
    }
    // On step inputs both limits coincide.
    for (int i = 0; i < 100; ++i) {
      const auto h = concave_hull(random_step(rng));
      const double beta = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
      const FieldSpec f = GaussianField{0.5, 0.7};
      CHECK(qcrem_pressure(h, beta, f).value == doctest::Approx(qgrem_pressure(h, beta, f).value).epsilon(1e-13));
    }
  }

  TEST_CASE("closed form branches") {
    const auto h = concave_hull(smooth_profile());
    const double beta = 1.0;
    CHECK(qcrem_closed_form(h, beta, 0.0) == doctest::Approx(classical_pressure(h, beta)).epsilon(1e-13));
    CHECK(qcrem_closed_form(h, beta, 5.0) == doctest::Approx(log_two_cosh(5.0)).epsilon(1e-14));
  }

  TEST_CASE("magnetization") {
    const auto h = concave_hull(smooth_profile());
    for (double beta : {0.5, 1.0, 2.0}) {
      CHECK(magnetization(h, beta, 0.0) == 0.0);
      CHECK(magnetization(h, beta, 10.0) == doctest::Approx(std::tanh(10.0 * beta)));
      for (int k = 0; k <= 200; ++k) {
        const double g = 0.02 * k;
        const double m = magnetization(h, beta, g);
        CHECK(m >= -1e-15);
        CHECK(m <= std::tanh(beta * g) + 1e-15);
      }
      // m_z = ∂Φ/∂Γ / β, checked by central differences away from kinks.
      for (double g : {0.37, 0.81, 1.23}) {
        const double eps = 1e-6;
        const double fd = (qcrem_closed_form(h, beta, g + eps) - qcrem_closed_form(h, beta, g - eps)) / (2 * eps * beta);
        CHECK(magnetization(h, beta, g) == doctest::Approx(fd).epsilon(1e-4));
      }
    }
  }

  TEST_CASE("single-level scan: one first-order transition") {
    const auto h = concave_hull(DistributionSpec::rem());
    for (double beta : {0.8, 1.0, 1.5}) {
      const auto t = transition_scan(h, beta);
      REQUIRE(t.size() == 1);
      CHECK(t[0].order == TransitionOrder::First);
      CHECK(t[0].gamma == doctest::Approx(qgrem_critical_fields(h, beta)[0]).epsilon(1e-5));
    }
  }

  TEST_CASE("two-level scan: two first-order transitions in ascending field") {
    const auto h = concave_hull(grem2());
    const auto t = transition_scan(h, 1.2);
    const auto gc = qgrem_critical_fields(h, 1.2);
    REQUIRE(t.size() == 2);
    CHECK(t[0].gamma == doctest::Approx(gc[1]).epsilon(1e-5));
    CHECK(t[1].gamma == doctest::Approx(gc[0]).epsilon(1e-5));
    for (const auto& x : t) CHECK(x.order == TransitionOrder::First);
  }

  TEST_CASE("smooth hull: two continuous transitions") {
    const auto h = concave_hull(smooth_profile());
    for (double beta : {0.7, 1.0, 1.6}) {
      const auto t = transition_scan(h, beta);
      REQUIRE(t.size() == 2);
      for (const auto& x : t) CHECK(x.order == TransitionOrder::Second);
      // m_z continuous across each point.
      for (const auto& x : t)
        CHECK(std::abs(magnetization(h, beta, x.gamma + 1e-6) - magnetization(h, beta, x.gamma - 1e-6)) < 0.05);
    }
  }
}
