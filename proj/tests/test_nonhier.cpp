#include <doctest.h>

#include <algorithm>
#include <random>

#include "qgrem/classical.hpp"
#include "qgrem/errors.hpp"
#include "qgrem/nonhier.hpp"
#include "qgrem/quantum.hpp"
#include "support.hpp"

using namespace qgrem;
using namespace qgrem::testing;

namespace {

NonHierModel two_block() {
  auto m = NonHierModel::make({0.5, 0.5});
  m.weight(0b01) = 0.2;
  m.weight(0b10) = 0.3;
  m.weight(0b11) = 0.5;
  return m;
}

std::vector<Chain> all_chains(int n) {
  Chain c;
  for (int i = 0; i < n; ++i) c.order.push_back(i);
  std::vector<Chain> out{c};
  while (std::next_permutation(c.order.begin(), c.order.end())) out.push_back(c);
  return out;
}

}  // namespace

TEST_SUITE("nonhier") {
  TEST_CASE("chain weights by hand summation") {
    const auto m = two_block();
    const auto g12 = chain_grem(m, Chain{{0, 1}});
    CHECK(g12.weights[0] == doctest::Approx(0.2));
    CHECK(g12.weights[1] == doctest::Approx(0.8));
    CHECK(g12.endpoints[0] == doctest::Approx(0.5));
    CHECK(g12.endpoints[1] == doctest::Approx(1.0));
    const auto g21 = chain_grem(m, Chain{{1, 0}});
    CHECK(g21.weights[0] == doctest::Approx(0.3));
    CHECK(g21.weights[1] == doctest::Approx(0.7));
    CHECK_THROWS_AS(chain_grem(m, Chain{{0, 0}}), ValidationError);
  }

  TEST_CASE("full chains partition the weight") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 50; ++i) {
      const auto m = random_nonhier(rng, 2 + i % 4);
      for (const auto& c : all_chains(m.n)) {
        double s = 0.0;
        for (double w : chain_grem(m, c).weights) s += w;
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("one block reduces to the single-level profile") {
    auto m = NonHierModel::make({1.0});
    m.weight(1) = 1.0;
    CHECK(classical_nonhier_pressure(m, 1.2).pressure == doctest::Approx(kRemPhiBeta12).epsilon(1e-14));
  }

  TEST_CASE("two-block model: minimum over both chains, greedy attains it") {
    const auto m = two_block();
    const double p12 = chain_pressure(m, Chain{{0, 1}}, 1.2);
    const double p21 = chain_pressure(m, Chain{{1, 0}}, 1.2);
    CHECK(classical_nonhier_pressure(m, 1.2).pressure == doctest::Approx(std::min(p12, p21)));
    CHECK(chain_pressure(m, greedy_chain(m), 1.2) == doctest::Approx(std::min(p12, p21)).epsilon(1e-12));
    // Slopes 0.4, 0.6, 1.0: the full set wins; completion in ascending order.
    CHECK(greedy_chain(m).order == std::vector<int>{0, 1});
  }

  TEST_CASE("symmetric weights make every chain equivalent") {
    auto m = NonHierModel::make({0.25, 0.25, 0.25, 0.25});
    double total = 0.0;
    for (Subset s = 1; s <= m.full(); ++s) total += m.weight(s) = 1.0 + std::popcount(s);
    for (auto& w : m.weights) w /= total;
    const double ref = chain_pressure(m, Chain{{0, 1, 2, 3}}, 1.5);
    for (const auto& c : all_chains(4)) CHECK(chain_pressure(m, c, 1.5) == doctest::Approx(ref).epsilon(1e-13));
  }

  TEST_CASE("hierarchical weights give the identity chain") {
    std::mt19937_64 rng(32);
    for (int n = 2; n <= 4; ++n) {
      auto m = NonHierModel::make(std::vector<double>(static_cast<std::size_t>(n), 1.0 / n));
      // Decreasing weights on prefixes {1}, {1,2}, ... keep prefix slopes dominant.
      double total = 0.0;
      for (int k = 1; k <= n; ++k) total += m.weight((Subset{1} << k) - 1) = std::pow(0.5, k);
      for (auto& w : m.weights) w /= total;
      Chain id;
      for (int k = 0; k < n; ++k) id.order.push_back(k);
      CHECK(greedy_chain(m).order == id.order);
      CHECK(classical_nonhier_pressure(m, 1.7).pressure == doctest::Approx(chain_pressure(m, id, 1.7)).epsilon(1e-13));
    }
  }

  TEST_CASE("greedy hull dominates every chain hull") {
    std::mt19937_64 rng(33);
    for (int i = 0; i < 60; ++i) {
      const auto m = random_nonhier(rng, 2 + i % 4);
      const auto greedy = concave_hull(chain_grem(m, greedy_chain(m)).profile());
      for (const auto& c : all_chains(m.n)) {
        const auto other = concave_hull(chain_grem(m, c).profile());
        for (int k = 0; k <= 100; ++k) CHECK(greedy(k / 100.0) >= other(k / 100.0) - 1e-12);
      }
    }
  }

  TEST_CASE("quantum non-hierarchical limit") {
    std::mt19937_64 rng(34);
    for (int i = 0; i < 40; ++i) {
      const auto m = random_nonhier(rng, 2 + i % 4);
      const double beta = std::uniform_real_distribution<double>(0.2, 2.5)(rng);
      CHECK(quantum_nonhier_pressure(m, beta, ConstantField{0.0}).pressure ==
            doctest::Approx(classical_nonhier_pressure(m, beta).pressure).epsilon(1e-12));
      CHECK(quantum_nonhier_pressure(m, 0.0, ConstantField{1.0}).pressure == doctest::Approx(kLn2).epsilon(1e-14));
      const auto gh = concave_hull(chain_grem(m, greedy_chain(m)).profile());
      for (double g : {0.5, 1.0, 2.0})
        CHECK(quantum_nonhier_pressure(m, beta, ConstantField{g}).pressure ==
              doctest::Approx(qgrem_pressure(gh, beta, ConstantField{g}).value).epsilon(1e-10));
    }
  }

  TEST_CASE("subset keys and capacity") {
    CHECK(subset_key(0b101) == "1,3");
    CHECK(parse_subset_key("1,3", 3) == 0b101);
    CHECK_THROWS_AS(parse_subset_key("3,1", 3), ValidationError);
    CHECK_THROWS_AS(parse_subset_key("4", 3), ValidationError);
    auto big = NonHierModel::make(std::vector<double>(11, 1.0 / 11));
    big.weight(big.full()) = 1.0;
    CHECK_THROWS_AS(classical_nonhier_pressure(big, 1.0), CapacityError);
    CHECK_NOTHROW(greedy_chain(big));
    auto bad = two_block();
    bad.weight(1) = 0.5;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
  }
}
