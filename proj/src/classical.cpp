#include "qgrem/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qgrem/errors.hpp"

namespace qgrem {

namespace {

bool is_frozen(double slope, double beta) {
  // β > sqrt(2 ln2/γ)  <=>  γβ² > 2 ln2; written without the division so γ = 0 is never frozen.
  return slope * beta * beta > 2.0 * kLn2;
}

}  // namespace

PartialPressureTable partial_pressures(const ConcaveHull& hull, double beta) {
  if (!(beta >= 0.0)) throw DomainError("partial_pressures: beta must be >= 0");
  PartialPressureTable table(hull.size());
  for (std::size_t l = 0; l < hull.size(); ++l) {
    const double a = hull.increments[l];
    const double len = hull.lengths[l];
    const double gamma = hull.slopes[l];
    auto& rec = table[l];
    rec.freezing_beta =
        gamma > 0.0 ? std::sqrt(2.0 * kLn2 / gamma) : std::numeric_limits<double>::infinity();
    rec.frozen = is_frozen(gamma, beta);
    rec.phi = rec.frozen ? beta * std::sqrt(2.0 * kLn2 * a * len) : 0.5 * beta * beta * a + len * kLn2;
  }
  return table;
}

double classical_pressure(const ConcaveHull& hull, double beta) {
  double acc = 0.0;
  for (const auto& rec : partial_pressures(hull, beta)) acc += rec.phi;
  return acc;
}

double freezing_boundary(const ConcaveHull& hull, double beta) {
  if (!(beta >= 0.0)) throw DomainError("freezing_boundary: beta must be >= 0");
  if (beta == 0.0) return 0.0;
  double x = 0.0;
  for (std::size_t l = 0; l < hull.size(); ++l) {
    if (!is_frozen(hull.slopes[l], beta)) break;
    x = hull.support[l];
  }
  return x;
}

double crem_truncated_pressure(const ConcaveHull& hull, double beta, double z) {
  if (!(beta >= 0.0)) throw DomainError("crem_truncated_pressure: beta must be >= 0");
  if (!(z >= 0.0) || z > hull.end() + 1e-12)
    throw DomainError("crem_truncated_pressure: z must lie in [0, hull end]");
  const double xb = freezing_boundary(hull, beta);
  const double upper = std::min(xb, z);

  double frozen_part = 0.0;
  for (std::size_t l = 0; l < hull.size(); ++l) {
    const double lo = hull.segment_start(l);
    if (lo >= upper) break;
    const double hi = std::min(hull.support[l], upper);
    frozen_part += std::sqrt(hull.slopes[l]) * (hi - lo);
  }
  double value = std::sqrt(2.0 * kLn2) * beta * frozen_part;
  if (z > xb) value += 0.5 * beta * beta * (hull(z) - hull(xb)) + kLn2 * (z - xb);
  return value;
}

std::vector<double> segment_derivatives(const ConcaveHull& hull, double beta) {
  std::vector<double> d(hull.size());
  for (std::size_t l = 0; l < hull.size(); ++l) {
    const double gamma = hull.slopes[l];
    d[l] = is_frozen(gamma, beta) ? beta * std::sqrt(2.0 * kLn2 * gamma)
                                  : kLn2 + 0.5 * beta * beta * gamma;
  }
  return d;
}

}  // namespace qgrem
