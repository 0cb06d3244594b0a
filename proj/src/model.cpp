#include "qgrem/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "qgrem/errors.hpp"

namespace qgrem {

DistributionSpec DistributionSpec::step(std::span<const double> jumps, std::span<const double> x,
                                        bool normalized) {
  if (jumps.size() != x.size()) throw ValidationError("step profile: jumps and x differ in length");
  DistributionSpec spec;
  spec.kind = DistributionKind::Step;
  spec.x.assign(x.begin(), x.end());
  spec.value.resize(jumps.size());
  std::partial_sum(jumps.begin(), jumps.end(), spec.value.begin());
  spec.normalized = normalized;
  spec.validate();
  return spec;
}

DistributionSpec DistributionSpec::rem() {
  const double one[] = {1.0};
  return step(one, one);
}

std::vector<double> DistributionSpec::jumps() const {
  std::vector<double> out(value.size());
  std::adjacent_difference(value.begin(), value.end(), out.begin());
  return out;
}

double DistributionSpec::operator()(double q) const {
  if (q <= 0.0 && kind == DistributionKind::Step) return 0.0;
  const auto it = std::upper_bound(x.begin(), x.end(), q);
  const auto k = static_cast<std::size_t>(it - x.begin());
  if (kind == DistributionKind::Step) return k == 0 ? 0.0 : value[k - 1];
  if (k == x.size()) return value.back();
  const double x0 = k == 0 ? 0.0 : x[k - 1];
  const double v0 = k == 0 ? 0.0 : value[k - 1];
  return v0 + (value[k] - v0) * (q - x0) / (x[k] - x0);
}

void DistributionSpec::validate() const {
  constexpr double tol = 1e-12;
  if (x.empty()) throw ValidationError("profile has no breakpoints");
  if (x.size() != value.size()) throw ValidationError("profile: x and values differ in length");
  double prev_x = 0.0;
  double prev_v = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!std::isfinite(x[k]) || !std::isfinite(value[k]))
      throw ValidationError("profile contains non-finite entries");
    if (!(x[k] > prev_x))
      throw ValidationError("profile breakpoints must be strictly increasing in (0,1]");
    if (value[k] < prev_v - tol)
      throw ValidationError("profile values must be nondecreasing (breakpoint " +
                            std::to_string(k + 1) + ")");
    prev_x = x[k];
    prev_v = value[k];
  }
  if (value.front() < -tol) throw ValidationError("profile values must be nonnegative");
  if (x.back() > 1.0 + tol) throw ValidationError("profile extends beyond 1");
  if (value.back() > 1.0 + tol) throw ValidationError("profile total weight exceeds 1");
  if (normalized) {
    if (std::abs(x.back() - 1.0) > tol) throw ValidationError("normalized profile must end at x = 1");
    if (std::abs(value.back() - 1.0) > tol) throw ValidationError("normalized profile must have A(1) = 1");
  }
}

double ConcaveHull::total() const {
  return std::accumulate(increments.begin(), increments.end(), 0.0);
}

double ConcaveHull::operator()(double y) const {
  double acc = 0.0;
  for (std::size_t l = 0; l < size(); ++l) {
    const double start = segment_start(l);
    if (y <= start) break;
    acc += y >= support[l] ? increments[l] : slopes[l] * (y - start);
  }
  return acc;
}

ConcaveHull concave_hull(const DistributionSpec& spec) {
  spec.validate();
  struct Point {
    double x, y;
  };
  // Upper hull by Andrew's monotone chain; the step and piecewise-linear
  // profiles share the same envelope of their breakpoint values.
  std::vector<Point> hull{{0.0, 0.0}};
  for (std::size_t k = 0; k < spec.x.size(); ++k) {
    const Point c{spec.x[k], spec.value[k]};
    while (hull.size() >= 2) {
      const Point& a = hull[hull.size() - 2];
      const Point& b = hull.back();
      const double cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
      if (cross < 0.0) break;
      hull.pop_back();
    }
    hull.push_back(c);
  }

  ConcaveHull out;
  for (std::size_t i = 1; i < hull.size(); ++i) {
    const double len = hull[i].x - hull[i - 1].x;
    const double inc = std::max(0.0, hull[i].y - hull[i - 1].y);
    out.support.push_back(hull[i].x);
    out.increments.push_back(inc);
    out.lengths.push_back(len);
    out.slopes.push_back(inc / len);
  }
  return out;
}

double right_derivative(const ConcaveHull& hull, double x) {
  if (!(x >= 0.0 && x < 1.0)) throw DomainError("right_derivative: x must lie in [0,1)");
  const auto it = std::upper_bound(hull.support.begin(), hull.support.end(), x);
  if (it == hull.support.end()) return 0.0;  // past the end of a reduced hull
  return hull.slopes[static_cast<std::size_t>(it - hull.support.begin())];
}

void validate(const FieldSpec& field) {
  std::visit(
      [](const auto& law) {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, ConstantField>) {
          if (!std::isfinite(law.gamma)) throw ValidationError("constant field must be finite");
        } else if constexpr (std::is_same_v<T, DiscreteField>) {
          if (law.values.empty() || law.values.size() != law.probabilities.size())
            throw ValidationError("discrete field: values and probabilities must be nonempty and match");
          double total = 0.0;
          for (std::size_t i = 0; i < law.values.size(); ++i) {
            if (!std::isfinite(law.values[i]) || !(law.probabilities[i] >= 0.0))
              throw ValidationError("discrete field: invalid atom");
            total += law.probabilities[i];
          }
          if (std::abs(total - 1.0) > 1e-12)
            throw ValidationError("discrete field: probabilities must sum to 1");
        } else if constexpr (std::is_same_v<T, GaussianField>) {
          if (!std::isfinite(law.mean) || !(law.stddev >= 0.0) || !std::isfinite(law.stddev))
            throw ValidationError("gaussian field: need finite mean and stddev >= 0");
        } else {
          if (law.sample.empty()) throw ValidationError("empirical field: empty sample");
          for (double v : law.sample)
            if (!std::isfinite(v)) throw ValidationError("empirical field: non-finite sample");
        }
      },
      field);
}

bool is_constant(const FieldSpec& field) { return std::holds_alternative<ConstantField>(field); }

double log_two_cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax));
}

QuadratureRule gauss_hermite(std::size_t order) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(order),
                                                 static_cast<Eigen::Index>(order));
  for (std::size_t k = 1; k < order; ++k) {
    const double off = std::sqrt(static_cast<double>(k) / 2.0);
    jacobi(k, k - 1) = off;
    jacobi(k - 1, k) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double mass = std::sqrt(std::numbers::pi);
  for (std::size_t i = 0; i < order; ++i) {
    rule.nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = mass * v0 * v0;
  }
  return rule;
}

namespace {

const QuadratureRule& default_hermite_rule() {
  static const QuadratureRule rule = gauss_hermite(200);
  return rule;
}

}  // namespace

double paramagnetic_pressure(const FieldSpec& field, double beta) {
  if (!(beta >= 0.0)) throw DomainError("paramagnetic_pressure: beta must be >= 0");
  validate(field);
  return std::visit(
      [beta](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, ConstantField>) {
          return log_two_cosh(beta * law.gamma);
        } else if constexpr (std::is_same_v<T, DiscreteField>) {
          double acc = 0.0;
          for (std::size_t i = 0; i < law.values.size(); ++i)
            acc += law.probabilities[i] * log_two_cosh(beta * law.values[i]);
          return acc;
        } else if constexpr (std::is_same_v<T, GaussianField>) {
          if (law.stddev == 0.0) return log_two_cosh(beta * law.mean);
          const auto& rule = default_hermite_rule();
          double acc = 0.0;
          for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double b = law.mean + std::numbers::sqrt2 * law.stddev * rule.nodes[i];
            acc += rule.weights[i] * log_two_cosh(beta * b);
          }
          return acc / std::sqrt(std::numbers::pi);
        } else {
          double acc = 0.0;
          for (double v : law.sample) acc += log_two_cosh(beta * v);
          return acc / static_cast<double>(law.sample.size());
        }
      },
      field);
}

}  // namespace qgrem
