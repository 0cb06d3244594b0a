#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace qgrem {

inline constexpr double kLn2 = 0.69314718055994530942;

enum class DistributionKind { Step, PiecewiseLinear };

/// Covariance profile A on [0,1], given by its values at breakpoints 0 < x_1 < ... < x_n.
///
/// For `Step`, A jumps by `value[k] - value[k-1]` at `x[k]` and is constant in
/// between. For `PiecewiseLinear`, A interpolates linearly through (0,0) and the
/// breakpoints. A normalized profile ends at x_n = 1 with A(1) = 1; reduced
/// profiles (normalized == false) may stop earlier and carry less total weight.
struct DistributionSpec {
  DistributionKind kind = DistributionKind::Step;
  std::vector<double> x;
  std::vector<double> value;
  bool normalized = true;

  /// Step profile from jump heights a_k placed at x_k.
  static DistributionSpec step(std::span<const double> jumps, std::span<const double> x,
                               bool normalized = true);
  /// Single-level REM profile: one jump of height 1 at x = 1.
  static DistributionSpec rem();

  std::vector<double> jumps() const;
  /// A(q) with right-continuity for steps.
  double operator()(double q) const;
  void validate() const;
};

/// Upper concave envelope of a profile.
///
/// `support` holds y_1 < ... < y_m (y_0 = 0 is implicit). Segment l spans
/// [y_{l-1}, y_l] with increment ā_l, length L_l and slope γ_l = ā_l / L_l;
/// slopes are strictly decreasing.
struct ConcaveHull {
  std::vector<double> support;
  std::vector<double> increments;
  std::vector<double> lengths;
  std::vector<double> slopes;

  std::size_t size() const { return support.size(); }
  bool empty() const { return support.empty(); }
  /// Right end y_m of the envelope (0 for an empty hull).
  double end() const { return support.empty() ? 0.0 : support.back(); }
  /// Left end y_{l-1} of segment l (0-based).
  double segment_start(std::size_t l) const { return l == 0 ? 0.0 : support[l - 1]; }
  /// Ā(y_m).
  double total() const;
  /// Ā(y); constant beyond the right end.
  double operator()(double y) const;
};

ConcaveHull concave_hull(const DistributionSpec& spec);

/// ā(x): slope of the segment with y_{l-1} <= x < y_l.
double right_derivative(const ConcaveHull& hull, double x);

// Transversal field weight law.
struct ConstantField {
  double gamma = 0.0;
};
struct DiscreteField {
  std::vector<double> values;
  std::vector<double> probabilities;
};
struct GaussianField {
  double mean = 0.0;
  double stddev = 1.0;
};
struct EmpiricalField {
  std::vector<double> sample;
};

using FieldSpec = std::variant<ConstantField, DiscreteField, GaussianField, EmpiricalField>;

void validate(const FieldSpec& field);
bool is_constant(const FieldSpec& field);

/// ln(2 cosh x) without overflow.
double log_two_cosh(double x);

/// p(β, 𝔟) = E[ln 2cosh(β𝔟)].
double paramagnetic_pressure(const FieldSpec& field, double beta);

/// Gauss-Hermite nodes and weights for the weight function exp(-t^2), via Golub-Welsch.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_hermite(std::size_t order);

}  // namespace qgrem
