#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qgrem/model.hpp"
#include "qgrem/nonhier.hpp"

namespace qgrem::testing {

// Reference scalars from a 30-digit mpmath evaluation (tools not shipped).
inline constexpr double kLogTwoCosh12 = 1.28683615215395;     // ln 2cosh(1.2)
inline constexpr double kRemPhiBeta1 = 1.19314718055995;      // 1/2 + ln 2
inline constexpr double kRemPhiBeta12 = 1.41289202701857;     // 1.2 sqrt(2 ln 2)
inline constexpr double kGremPhi1 = 0.835878195674720;        // 1.2 sqrt(2 ln2 0.35)
inline constexpr double kGremPhi2 = 0.562573590279973;        // 0.72 * 0.3 + ln2 / 2
inline constexpr double kGremClassical = 1.39845178595469;
inline constexpr double kGremBeta1 = 0.995093090088952;
inline constexpr double kGremBeta2 = 1.52002980295338;
inline constexpr double kGremQuantum = 1.47929627175169;      // K = 1 at Γ = 1
inline constexpr double kRemCriticalField = 1.08503850194839; // β = 1
inline constexpr double kRemTruncatedHalf = 0.706446013509285;
inline constexpr double kFreezeThreshold12 = 0.962704417444368;
inline constexpr double kRemCriticalBeta = 1.17741002251547;

inline DistributionSpec grem2() {
  const double a[] = {0.7, 0.3};
  const double x[] = {0.5, 1.0};
  return DistributionSpec::step(a, x);
}

/// Random normalized step profile with 1..max_levels jumps.
inline DistributionSpec random_step(std::mt19937_64& rng, int max_levels = 6) {
  std::uniform_int_distribution<int> levels(1, max_levels);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int m = levels(rng);
  std::vector<double> x;
  while (static_cast<int>(x.size()) < m - 1) {
    const double v = 0.02 + 0.96 * u(rng);
    if (std::none_of(x.begin(), x.end(), [&](double w) { return std::abs(w - v) < 1e-3; })) x.push_back(v);
  }
  std::sort(x.begin(), x.end());
  x.push_back(1.0);
  std::vector<double> a(static_cast<std::size_t>(m));
  double total = 0.0;
  for (auto& v : a) total += v = 0.05 + u(rng);
  for (auto& v : a) v /= total;
  return DistributionSpec::step(a, x);
}

/// Random concave-ish piecewise-linear profile on a grid of `points` nodes.
inline DistributionSpec random_piecewise(std::mt19937_64& rng, int points = 12) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DistributionSpec s;
  s.kind = DistributionKind::PiecewiseLinear;
  double acc = 0.0;
  std::vector<double> inc;
  for (int i = 0; i < points; ++i) inc.push_back(0.02 + u(rng));
  double total = 0.0;
  for (double v : inc) total += v;
  for (int i = 0; i < points; ++i) {
    s.x.push_back(static_cast<double>(i + 1) / points);
    acc += inc[static_cast<std::size_t>(i)] / total;
    s.value.push_back(i + 1 == points ? 1.0 : acc);
  }
  return s;
}

/// Random non-hierarchical model: equal or random lengths, random sparse weights.
inline NonHierModel random_nonhier(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> lengths(static_cast<std::size_t>(n));
  double lt = 0.0;
  for (auto& l : lengths) lt += l = 0.2 + u(rng);
  for (auto& l : lengths) l /= lt;
  auto m = NonHierModel::make(lengths);
  double total = 0.0;
  for (Subset s = 1; s <= m.full(); ++s) {
    const double w = u(rng) < 0.6 ? u(rng) : 0.0;
    m.weight(s) = w;
    total += w;
  }
  if (total == 0.0) {
    m.weight(m.full()) = 1.0;
    total = 1.0;
  }
  for (auto& w : m.weights) w /= total;
  return m;
}

/// Smooth profile A(x) = (3x - x^2)/2 sampled on `points` nodes; ā runs from 1.5 down to 0.5.
inline DistributionSpec smooth_profile(int points = 50) {
  DistributionSpec s;
  s.kind = DistributionKind::PiecewiseLinear;
  for (int i = 1; i <= points; ++i) {
    const double x = static_cast<double>(i) / points;
    s.x.push_back(x);
    s.value.push_back(i == points ? 1.0 : (3.0 * x - x * x) / 2.0);
  }
  return s;
}

inline DistributionSpec grem3() {
  const double a[] = {0.5, 0.3, 0.2};
  const double x[] = {0.25, 0.6, 1.0};
  return DistributionSpec::step(a, x);
}

}  // namespace qgrem::testing
