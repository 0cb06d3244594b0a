#include "qgrem/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "qgrem/classical.hpp"
#include "qgrem/errors.hpp"

namespace qgrem {

namespace {

/// arcosh(½ e^u) for u >= ln2, stable for u near ln2 and for large u.
double arcosh_half_exp(double u) {
  const double delta = std::max(0.0, u - kLn2);
  return delta + std::log1p(std::sqrt(-std::expm1(-2.0 * delta)));
}

std::vector<BlockPhase> phases_for(std::size_t m, std::size_t classical_blocks) {
  std::vector<BlockPhase> out(m, BlockPhase::Paramagnetic);
  std::fill_n(out.begin(), classical_blocks, BlockPhase::Classical);
  return out;
}

template <class Prefix>
QuantumPressureResult maximize_over_support(const ConcaveHull& hull, double p, Prefix&& prefix) {
  QuantumPressureResult best;
  best.value = p;  // K = 0
  for (std::size_t k = 1; k <= hull.size(); ++k) {
    const double y = hull.support[k - 1];
    const double v = prefix(k) + (1.0 - y) * p;
    if (v > best.value) {
      best.value = v;
      best.argmax_index = k;
      best.argmax_point = y;
    }
  }
  best.block_phases = phases_for(hull.size(), best.argmax_index);
  return best;
}

}  // namespace

QuantumPressureResult qgrem_pressure(const ConcaveHull& hull, double beta, const FieldSpec& field) {
  const double p = paramagnetic_pressure(field, beta);
  const auto table = partial_pressures(hull, beta);
  std::vector<double> cumulative(table.size() + 1, 0.0);
  for (std::size_t l = 0; l < table.size(); ++l) cumulative[l + 1] = cumulative[l] + table[l].phi;
  return maximize_over_support(hull, p, [&](std::size_t k) { return cumulative[k]; });
}

std::vector<double> qgrem_critical_fields(const ConcaveHull& hull, double beta) {
  if (!(beta > 0.0)) throw DomainError("critical fields need beta > 0");
  const auto table = partial_pressures(hull, beta);
  std::vector<double> out(table.size());
  for (std::size_t l = 0; l < table.size(); ++l)
    out[l] = arcosh_half_exp(table[l].phi / hull.lengths[l]) / beta;
  return out;
}

double qgrem_indicator_pressure(const ConcaveHull& hull, double beta, double gamma) {
  const auto table = partial_pressures(hull, beta);
  const double p = log_two_cosh(beta * gamma);
  if (beta == 0.0) return p;
  const auto critical = qgrem_critical_fields(hull, beta);
  double acc = (1.0 - hull.end()) * p;
  for (std::size_t l = 0; l < table.size(); ++l)
    acc += gamma < critical[l] ? table[l].phi : hull.lengths[l] * p;
  return acc;
}

QuantumPressureResult qcrem_pressure(const ConcaveHull& hull, double beta, const FieldSpec& field) {
  const double p = paramagnetic_pressure(field, beta);
  return maximize_over_support(hull, p, [&](std::size_t k) {
    return crem_truncated_pressure(hull, beta, hull.support[k - 1]);
  });
}

double g_beta(const ConcaveHull& hull, double beta, double p) {
  const auto d = segment_derivatives(hull, beta);
  const auto steeper = static_cast<std::size_t>(
      std::count_if(d.begin(), d.end(), [p](double v) { return v > p; }));
  return steeper == 0 ? 0.0 : hull.support[steeper - 1];
}

double qcrem_closed_form(const ConcaveHull& hull, double beta, double gamma) {
  const double p = log_two_cosh(beta * gamma);
  if (hull.empty()) return p;
  const auto d = segment_derivatives(hull, beta);
  const double s = d.back();
  const double t = d.front();
  if (p <= s) return crem_truncated_pressure(hull, beta, hull.end()) + (1.0 - hull.end()) * p;
  if (p >= t) return p;
  const double g = g_beta(hull, beta, p);
  return crem_truncated_pressure(hull, beta, g) + (1.0 - g) * p;
}

double magnetization(const ConcaveHull& hull, double beta, double gamma) {
  if (!(beta > 0.0)) throw DomainError("magnetization: beta must be > 0");
  if (!(gamma >= 0.0)) throw DomainError("magnetization: gamma must be >= 0");
  const double p = log_two_cosh(beta * gamma);
  const double th = std::tanh(beta * gamma);
  if (hull.empty()) return th;
  const auto d = segment_derivatives(hull, beta);
  if (p <= d.back()) return (1.0 - hull.end()) * th;
  if (p >= d.front()) return th;
  return (1.0 - g_beta(hull, beta, p)) * th;
}

std::vector<Transition> transition_scan(const ConcaveHull& hull, double beta,
                                        const TransitionScanOptions& options) {
  if (!(beta > 0.0)) throw DomainError("transition_scan: beta must be > 0");
  if (hull.empty()) return {};

  double gamma_max = options.gamma_max;
  if (gamma_max <= 0.0) {
    const auto d = segment_derivatives(hull, beta);
    gamma_max = 1.5 * arcosh_half_exp(d.front()) / beta + 1.0;
  }
  const double h = options.window;
  const double gamma_min = h;

  auto mz = [&](double g) { return magnetization(hull, beta, std::max(g, 0.0)); };
  // m_z / tanh(βΓ) is the magnetized volume fraction; piecewise constant and nondecreasing.
  auto fraction = [&](double g) { return mz(g) / std::tanh(beta * g); };

  struct Step {
    double gamma, jump, volume;
  };
  std::vector<Step> steps;
  std::vector<std::pair<double, double>> stack;
  const std::size_t cells = std::max<std::size_t>(options.initial_cells, 1);
  for (std::size_t i = cells; i-- > 0;) {
    const double a = gamma_min + (gamma_max - gamma_min) * static_cast<double>(i) / cells;
    const double b = gamma_min + (gamma_max - gamma_min) * static_cast<double>(i + 1) / cells;
    stack.emplace_back(a, b);
  }
  while (!stack.empty()) {
    const auto [a, b] = stack.back();
    stack.pop_back();
    const double fa = fraction(a);
    const double fb = fraction(b);
    if (std::abs(fb - fa) <= 1e-12) continue;
    if (b - a <= h) {
      steps.push_back({0.5 * (a + b), mz(b) - mz(a), fb - fa});
      continue;
    }
    const double mid = 0.5 * (a + b);
    stack.emplace_back(mid, b);
    stack.emplace_back(a, mid);
  }
  std::sort(steps.begin(), steps.end(), [](const Step& l, const Step& r) { return l.gamma < r.gamma; });

  auto macroscopic = [&](const Step& s) {
    return s.volume >= options.min_volume_fraction && s.jump > options.jump_tolerance;
  };

  std::vector<Transition> out;
  std::size_t i = 0;
  while (i < steps.size()) {
    if (macroscopic(steps[i])) {
      out.push_back({steps[i].gamma, TransitionOrder::First, steps[i].jump});
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < steps.size() && !macroscopic(steps[j + 1])) ++j;
    if (j == i) {
      if (steps[i].jump > options.jump_tolerance)
        out.push_back({steps[i].gamma, TransitionOrder::First, steps[i].jump});
    } else {
      // A run of small steps approximates a continuous m_z; only its ends are transitions.
      const double lo = steps[i].gamma;
      const double hi = steps[j].gamma;
      const double w = 3.0 * (hi - lo) / static_cast<double>(j - i);
      auto slope = [&](double a, double b) { return (mz(b) - mz(a)) / (b - a); };
      const double lo_before = slope(std::max(lo - h - w, 0.0), lo - h);
      const double lo_after = slope(lo - h, lo + w);
      if (std::abs(lo_after - lo_before) > options.slope_tolerance)
        out.push_back({lo, TransitionOrder::Second, steps[i].jump});
      const double hi_before = slope(hi - w, hi + h);
      const double hi_after = slope(hi + h, hi + h + w);
      if (std::abs(hi_after - hi_before) > options.slope_tolerance)
        out.push_back({hi, TransitionOrder::Second, steps[j].jump});
    }
    i = j + 1;
  }
  return out;
}

}  // namespace qgrem
