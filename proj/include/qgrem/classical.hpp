#pragma once

#include <vector>

#include "qgrem/model.hpp"

namespace qgrem {

/// Contribution of one hull segment to the classical pressure.
struct PartialPressure {
  double phi = 0.0;
  /// β_l = sqrt(2 ln2 / γ_l); +inf for a flat segment.
  double freezing_beta = 0.0;
  bool frozen = false;
};

using PartialPressureTable = std::vector<PartialPressure>;

/// φ_l(β) = β²ā_l/2 + L_l ln2 below β_l, β·sqrt(2 ln2 ā_l L_l) above.
/// Holds for reduced hulls whose increments do not sum to one.
PartialPressureTable partial_pressures(const ConcaveHull& hull, double beta);

/// Σ_l φ_l(β).
double classical_pressure(const ConcaveHull& hull, double beta);

/// x(β) = sup{x : ā(x) > 2 ln2/β²}, i.e. the right end of the last segment
/// steeper than the threshold. Returns 0 for β = 0.
double freezing_boundary(const ConcaveHull& hull, double beta);

/// Truncated pressure Φ(β,z) for z in [0, hull end]; closed-form segment integrals.
double crem_truncated_pressure(const ConcaveHull& hull, double beta, double z);

/// ∂Φ(β,z)/∂z on segment l: β·sqrt(2 ln2 γ_l) when frozen, ln2 + β²γ_l/2 otherwise.
/// Equals φ_l / L_l.
std::vector<double> segment_derivatives(const ConcaveHull& hull, double beta);

}  // namespace qgrem
