#pragma once

#include <cstddef>
#include <vector>

#include "qgrem/model.hpp"

namespace qgrem {

enum class BlockPhase { Classical, Paramagnetic };

struct QuantumPressureResult {
  double value = 0.0;
  /// Number of leading hull segments in classical order (0 = pure paramagnet).
  std::size_t argmax_index = 0;
  /// Matching truncation point z* = y_K.
  double argmax_point = 0.0;
  std::vector<BlockPhase> block_phases;
};

/// Quantum GREM limit: max over K in {0..m} of Σ_{l<=K} φ_l(β) + (1 - y_K) p(β,𝔟).
/// Ties resolve to the smallest K.
QuantumPressureResult qgrem_pressure(const ConcaveHull& hull, double beta, const FieldSpec& field);

/// Γ_c^(l) = (1/β) arcosh(½ exp(φ_l/L_l)), strictly decreasing in l. Requires β > 0.
std::vector<double> qgrem_critical_fields(const ConcaveHull& hull, double beta);

/// Sum of per-block terms: φ_l below Γ_c^(l), L_l ln 2cosh(βΓ) at or above it.
double qgrem_indicator_pressure(const ConcaveHull& hull, double beta, double gamma);

/// Quantum CREM limit: sup over z of Φ(β,z) + (1 - z) p(β,𝔟), evaluated on hull support points.
QuantumPressureResult qcrem_pressure(const ConcaveHull& hull, double beta, const FieldSpec& field);

/// Generalized inverse of z -> ∂Φ(β,z)/∂z at level p: leftmost z where the derivative
/// drops to p or below.
double g_beta(const ConcaveHull& hull, double beta, double p);

/// Three-branch constant-field expression built from s(β), t(β) and g_β.
double qcrem_closed_form(const ConcaveHull& hull, double beta, double gamma);

/// Transversal magnetization m_z(β,Γ).
double magnetization(const ConcaveHull& hull, double beta, double gamma);

enum class TransitionOrder { First, Second };

struct Transition {
  double gamma = 0.0;
  TransitionOrder order = TransitionOrder::First;
  /// m_z(Γ+) - m_z(Γ-) across the detection window.
  double jump = 0.0;
};

struct TransitionScanOptions {
  /// Γ-window the bisection refines discontinuities down to.
  double window = 1e-6;
  /// An m_z jump above this across the window is a discontinuity.
  double jump_tolerance = 1e-3;
  /// A discontinuity is first order when it flips at least this fraction of spins,
  /// i.e. Δm_z / tanh(βΓ) >= min_volume_fraction. Smaller steps in a run are
  /// treated as the discretization of a continuous hull.
  double min_volume_fraction = 0.05;
  /// Slope jump in coarse-grained m_z needed to report a second-order point.
  double slope_tolerance = 1e-2;
  std::size_t initial_cells = 256;
  /// Upper end of the scan; 0 picks 1.5x the last critical field plus 1.
  double gamma_max = 0.0;
};

/// Locates magnetic transitions in Γ at fixed β > 0, in ascending Γ.
std::vector<Transition> transition_scan(const ConcaveHull& hull, double beta,
                                        const TransitionScanOptions& options = {});

}  // namespace qgrem
