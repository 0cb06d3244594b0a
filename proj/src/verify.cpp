#include "qgrem/verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <tuple>

#include "qgrem/classical.hpp"
#include "qgrem/errors.hpp"
#include "qgrem/quantum.hpp"

namespace qgrem {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_spins(int N, int bound) {
  if (N < 1) throw DomainError("need at least one spin");
  if (N > bound)
    throw CapacityError("N = " + std::to_string(N) + " exceeds the limit of " + std::to_string(bound) +
                        " spins for this path");
}

double log_sum_exp_neg(const Eigen::VectorXd& energies, double beta) {
  const double anchor = energies.minCoeff();
  return -beta * anchor + std::log((-beta * (energies.array() - anchor)).exp().sum());
}

Eigen::VectorXd hierarchical_potential(const DistributionSpec& spec, int N, std::mt19937_64& rng) {
  const DistributionSpec steps = step_at_resolution(spec, N);
  const auto bounds = block_boundaries(steps.x, N);
  const auto jumps = steps.jumps();
  const std::size_t dim = std::size_t{1} << N;
  std::normal_distribution<double> normal;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  for (std::size_t k = 0; k < bounds.size(); ++k) {
    const int prefix_bits = bounds[k];
    const std::size_t count = std::size_t{1} << prefix_bits;
    std::vector<double> level(count);
    for (auto& v : level) v = normal(rng);
    const double scale = std::sqrt(static_cast<double>(N) * std::max(0.0, jumps[k]));
    for (std::size_t s = 0; s < dim; ++s) u[static_cast<Eigen::Index>(s)] += scale * level[s >> (N - prefix_bits)];
  }
  return u;
}

Eigen::VectorXd nonhier_potential(const NonHierModel& model, int N, std::mt19937_64& rng) {
  model.validate();
  std::vector<double> x(model.lengths.size());
  std::partial_sum(model.lengths.begin(), model.lengths.end(), x.begin());
  x.back() = 1.0;
  const auto bounds = block_boundaries(x, N);
  const std::size_t dim = std::size_t{1} << N;
  std::normal_distribution<double> normal;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  for (Subset j = 1; j <= model.full(); ++j) {
    const double a = model.weight(j);
    if (a == 0.0) continue;
    // Spin positions (0-based from the top) owned by blocks in J.
    std::vector<int> bits;
    for (int k = 0; k < model.n; ++k) {
      if (!(j >> k & 1U)) continue;
      const int lo = k == 0 ? 0 : bounds[static_cast<std::size_t>(k - 1)];
      for (int pos = lo; pos < bounds[static_cast<std::size_t>(k)]; ++pos) bits.push_back(N - 1 - pos);
    }
    std::vector<double> table(std::size_t{1} << bits.size());
    for (auto& t : table) t = normal(rng);
    const double scale = std::sqrt(static_cast<double>(N) * a);
    for (std::size_t s = 0; s < dim; ++s) {
      std::size_t idx = 0;
      for (int b : bits) idx = (idx << 1) | ((s >> b) & 1U);
      v[static_cast<Eigen::Index>(s)] += scale * table[idx];
    }
  }
  return v;
}

}  // namespace

std::vector<int> block_boundaries(std::span<const double> x, int N) {
  std::vector<int> out;
  int prev = 0;
  for (double xk : x) {
    const int b = static_cast<int>(std::ceil(xk * N - 1e-9));
    if (b <= prev)
      throw ValidationError("N = " + std::to_string(N) + " leaves a block empty; increase N");
    out.push_back(b);
    prev = b;
  }
  if (out.back() != N) throw ValidationError("profile must end at x = 1 to sample an instance");
  return out;
}

DistributionSpec step_at_resolution(const DistributionSpec& spec, int N) {
  spec.validate();
  if (spec.kind == DistributionKind::Step) return spec;
  DistributionSpec out;
  out.kind = DistributionKind::Step;
  out.normalized = spec.normalized;
  for (int i = 1; i <= N; ++i) {
    const double q = static_cast<double>(i) / N;
    out.x.push_back(q);
    out.value.push_back(spec(q));
  }
  out.x.back() = 1.0;
  return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t replica) {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ replica);
}

Eigen::VectorXd sample_potential(const DisorderSource& source, int N, std::uint64_t seed) {
  check_spins(N, kMaxStochasticSpins);
  std::mt19937_64 rng(seed);
  return std::visit(
      [&](const auto& s) -> Eigen::VectorXd {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, DistributionSpec>)
          return hierarchical_potential(s, N, rng);
        else
          return nonhier_potential(s, N, rng);
      },
      source);
}

Eigen::VectorXd sample_field(const FieldSpec& field, int N, std::uint64_t seed) {
  validate(field);
  std::mt19937_64 rng(seed);
  Eigen::VectorXd b(N);
  std::visit(
      [&](const auto& law) {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, ConstantField>) {
          b.setConstant(law.gamma);
        } else if constexpr (std::is_same_v<T, DiscreteField>) {
          std::discrete_distribution<std::size_t> pick(law.probabilities.begin(), law.probabilities.end());
          for (int j = 0; j < N; ++j) b[j] = law.values[pick(rng)];
        } else if constexpr (std::is_same_v<T, GaussianField>) {
          std::normal_distribution<double> normal(law.mean, law.stddev);
          for (int j = 0; j < N; ++j) b[j] = law.stddev > 0.0 ? normal(rng) : law.mean;
        } else {
          std::uniform_int_distribution<std::size_t> pick(0, law.sample.size() - 1);
          for (int j = 0; j < N; ++j) b[j] = law.sample[pick(rng)];
        }
      },
      field);
  return b;
}

FiniteInstance sample_instance(const DisorderSource& source, const FieldSpec& field, int N,
                               std::uint64_t seed) {
  FiniteInstance inst;
  inst.N = N;
  inst.seed = seed;
  inst.potential = sample_potential(source, N, derive_seed(seed, 1, 0));
  inst.field_weights = sample_field(field, N, derive_seed(seed, 2, 0));
  return inst;
}

double lexicographic_overlap(std::uint64_t a, std::uint64_t b, int N) {
  if (a == b) return 1.0;
  const std::uint64_t diff = a ^ b;
  const int top = static_cast<int>(std::bit_width(diff));  // highest differing bit + 1
  return static_cast<double>(N - top) / N;
}

Eigen::MatrixXd dense_hamiltonian(const FiniteInstance& inst) {
  check_spins(inst.N, kMaxExactSpins);
  const auto dim = static_cast<Eigen::Index>(inst.dimension());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  h.diagonal() = inst.potential;
  for (Eigen::Index s = 0; s < dim; ++s)
    for (int j = 1; j <= inst.N; ++j) h(s, s ^ (Eigen::Index{1} << (inst.N - j))) = -inst.field_weights[j - 1];
  return h;
}

void apply_hamiltonian(const FiniteInstance& inst, const ProbeBlock& x, ProbeBlock& y) {
  const auto dim = static_cast<Eigen::Index>(inst.dimension());
  y.resize(x.rows(), x.cols());
  for (Eigen::Index s = 0; s < dim; ++s) {
    auto row = y.row(s);
    row = inst.potential[s] * x.row(s);
    for (int j = 1; j <= inst.N; ++j)
      row -= inst.field_weights[j - 1] * x.row(s ^ (Eigen::Index{1} << (inst.N - j)));
  }
}

Eigen::VectorXd exact_spectrum(const FiniteInstance& inst) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_hamiltonian(inst), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed to converge");
  return es.eigenvalues();
}

double pressure_from_spectrum(const Eigen::VectorXd& eigenvalues, double beta, int N) {
  return log_sum_exp_neg(eigenvalues, beta) / N;
}

double exact_pressure(const FiniteInstance& inst, double beta) {
  return pressure_from_spectrum(exact_spectrum(inst), beta, inst.N);
}

double diagonal_pressure(const FiniteInstance& inst, double beta) {
  return log_sum_exp_neg(inst.potential, beta) / inst.N;
}

double field_only_pressure(const FiniteInstance& inst, double beta) {
  double acc = 0.0;
  for (int j = 0; j < inst.N; ++j) acc += log_two_cosh(beta * inst.field_weights[j]);
  return acc / inst.N;
}

double field_gibbs_bound(const FiniteInstance& inst, double beta) {
  return field_only_pressure(inst, beta) - beta * inst.potential.mean() / inst.N;
}

namespace {

/// Chebyshev coefficients of t -> exp(-alpha (1 + t)) on [-1,1] from m-point interpolation.
std::vector<double> chebyshev_exp_coefficients(double alpha, std::size_t m) {
  std::vector<double> f(m);
  const double pi = std::numbers::pi;
  for (std::size_t j = 0; j < m; ++j) {
    const double t = std::cos(pi * (static_cast<double>(j) + 0.5) / static_cast<double>(m));
    f[j] = std::exp(-alpha * (1.0 + t));
  }
  std::vector<double> c(m);
  for (std::size_t k = 0; k < m; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      acc += f[j] * std::cos(pi * static_cast<double>(k) * (static_cast<double>(j) + 0.5) / static_cast<double>(m));
    c[k] = 2.0 * acc / static_cast<double>(m);
  }
  c[0] *= 0.5;
  return c;
}

}  // namespace

StochasticResult stochastic_pressure(const FiniteInstance& inst, double beta,
                                     const StochasticOptions& options) {
  check_spins(inst.N, kMaxStochasticSpins);
  if (options.probes == 0) throw DomainError("stochastic_pressure: need at least one probe");
  if (!(beta >= 0.0)) throw DomainError("stochastic_pressure: beta must be >= 0");

  const double field_norm = inst.field_weights.cwiseAbs().sum();
  const double lo = inst.potential.minCoeff() - field_norm;
  const double hi = inst.potential.maxCoeff() + field_norm;
  const double center = 0.5 * (lo + hi);
  const double radius = 0.5 * (hi - lo);
  const double alpha = beta * radius;
  const auto dim = static_cast<Eigen::Index>(inst.dimension());
  const auto probes = static_cast<Eigen::Index>(options.probes);

  StochasticResult result;
  // Shifted operator exp(-β(H - lo)) has spectrum in (0, 1] and trace >= exp(-β Σ|b|).
  const double target =
      options.tolerance * std::exp(-beta * field_norm) / static_cast<double>(inst.dimension());

  std::vector<double> coeffs{1.0};
  std::size_t degree = 0;
  if (alpha > 0.0) {
    result.converged = false;
    for (std::size_t m = 16;; m *= 2) {
      const std::size_t nodes = std::min(m, options.max_degree + 1);
      coeffs = chebyshev_exp_coefficients(alpha, nodes);
      // Interpolation error is at most twice the neglected tail.
      double tail = 0.0;
      degree = nodes - 1;
      for (std::size_t k = nodes; k-- > 1;) {
        if (2.0 * (tail + std::abs(coeffs[k])) > target) break;
        tail += std::abs(coeffs[k]);
        degree = k - 1;
      }
      const bool resolved = std::abs(coeffs.back()) < std::max(1e-3 * target, 1e-15);
      if (resolved && degree + 1 < nodes) {
        result.converged = true;
        break;
      }
      if (nodes == options.max_degree + 1) {
        degree = options.max_degree;
        break;
      }
    }
    coeffs.resize(degree + 1);
  }
  result.degree = degree;

  std::mt19937_64 rng(derive_seed(options.seed, inst.seed, 3));
  std::bernoulli_distribution coin(0.5);
  ProbeBlock z(dim, probes);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index p = 0; p < probes; ++p) z(i, p) = coin(rng) ? 1.0 : -1.0;

  Eigen::RowVectorXd estimates = coeffs[0] * Eigen::RowVectorXd::Constant(probes, static_cast<double>(dim));
  if (degree >= 1) {
    // (H - center)/radius applied through the matrix-free Hamiltonian.
    auto apply_scaled = [&](const ProbeBlock& x, ProbeBlock& y) {
      apply_hamiltonian(inst, x, y);
      y = (y - center * x) / radius;
    };
    ProbeBlock prev = z;
    ProbeBlock curr;
    apply_scaled(z, curr);
    estimates += coeffs[1] * z.cwiseProduct(curr).colwise().sum();
    ProbeBlock next;
    for (std::size_t k = 2; k <= degree; ++k) {
      apply_scaled(curr, next);
      next = 2.0 * next - prev;
      estimates += coeffs[k] * z.cwiseProduct(next).colwise().sum();
      std::swap(prev, curr);
      std::swap(curr, next);
    }
  }

  const double mean = estimates.mean();
  double var = 0.0;
  if (probes > 1) var = (estimates.array() - mean).square().sum() / static_cast<double>(probes - 1);
  const double stderr_trace = std::sqrt(var / static_cast<double>(probes));
  if (!(mean > 0.0)) {
    result.converged = false;
    result.pressure = std::numeric_limits<double>::quiet_NaN();
    result.error = std::numeric_limits<double>::infinity();
    return result;
  }
  result.pressure = (std::log(mean) - beta * lo) / inst.N;
  result.error = stderr_trace / mean / inst.N;
  return result;
}

Eigen::VectorXd diagonal_of_gibbs_operator(const FiniteInstance& inst, double beta) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_hamiltonian(inst));
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed to converge");
  const Eigen::VectorXd& lambda = es.eigenvalues();
  const Eigen::VectorXd weights = (-beta * (lambda.array() - lambda.minCoeff())).exp().matrix();
  return es.eigenvectors().cwiseAbs2() * weights;
}

double sign_invariance_check(const FiniteInstance& inst, double beta, std::uint64_t flip_mask) {
  FiniteInstance flipped = inst;
  for (int j = 0; j < inst.N; ++j)
    if (flip_mask >> j & 1U) flipped.field_weights[j] = -flipped.field_weights[j];
  const Eigen::VectorXd d0 = diagonal_of_gibbs_operator(inst, beta);
  const Eigen::VectorXd d1 = diagonal_of_gibbs_operator(flipped, beta);
  const double scale = d0.cwiseAbs().maxCoeff();
  return scale > 0.0 ? (d0 - d1).cwiseAbs().maxCoeff() / scale : 0.0;
}

double finite_pressure(const FiniteInstance& inst, double beta, const ReplicaOptions& options) {
  const bool exact = options.method == PressureMethod::Exact ||
                     (options.method == PressureMethod::Auto && inst.N <= options.auto_exact_max_N);
  if (exact) return exact_pressure(inst, beta);
  const auto r = stochastic_pressure(inst, beta, options.stochastic);
  if (!std::isfinite(r.pressure)) throw std::runtime_error("stochastic trace estimate failed");
  return r.pressure;
}

std::string field_label(const FieldSpec& field) {
  std::ostringstream os;
  os << std::setprecision(17);
  std::visit(
      [&](const auto& law) {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, ConstantField>)
          os << law.gamma;
        else if constexpr (std::is_same_v<T, DiscreteField>)
          os << "discrete(" << law.values.size() << ")";
        else if constexpr (std::is_same_v<T, GaussianField>)
          os << "gaussian(" << law.mean << ";" << law.stddev << ")";
        else
          os << "empirical(" << law.sample.size() << ")";
      },
      field);
  return os.str();
}

std::vector<ReplicaRow> sample_replicas(const DisorderSource& source, const FieldSpec& field, int N,
                                        double beta, std::size_t replicas, std::uint64_t seed,
                                        const ReplicaOptions& options) {
  std::vector<ReplicaRow> rows;
  rows.reserve(replicas);
  const std::string label = field_label(field);
  Eigen::VectorXd frozen;
  for (std::size_t r = 0; r < replicas; ++r) {
    FiniteInstance inst = sample_instance(source, field, N, derive_seed(seed, 0, r));
    if (options.freeze_field) {
      if (r == 0) frozen = inst.field_weights;
      inst.field_weights = frozen;
    }
    rows.push_back({r, N, beta, label, finite_pressure(inst, beta, options)});
  }
  return rows;
}

namespace {

std::pair<double, double> mean_and_stddev(const std::vector<ReplicaRow>& rows) {
  double mean = 0.0;
  for (const auto& r : rows) mean += r.phi;
  mean /= static_cast<double>(rows.size());
  double var = 0.0;
  for (const auto& r : rows) var += (r.phi - mean) * (r.phi - mean);
  if (rows.size() > 1) var /= static_cast<double>(rows.size() - 1);
  return {mean, std::sqrt(var)};
}

}  // namespace

ConcentrationReport concentration_check(const DisorderSource& source, const FieldSpec& field, int N,
                                        double beta, std::size_t replicas, std::uint64_t seed,
                                        ReplicaOptions options) {
  if (replicas < 200) throw DomainError("concentration_check needs at least 200 replicas");
  options.freeze_field = true;
  const auto rows = sample_replicas(source, field, N, beta, replicas, seed, options);
  ConcentrationReport rep;
  rep.N = N;
  rep.beta = beta;
  std::tie(rep.mean, rep.stddev) = mean_and_stddev(rows);
  const double R = static_cast<double>(replicas);
  for (double t : {1.0, 2.0, 3.0}) {
    // Rounding slack keeps a deterministic Φ_N (β = 0) from counting as a deviation.
    const double threshold = t * beta / std::sqrt(static_cast<double>(N)) + 1e-12 * std::max(1.0, std::abs(rep.mean));
    const auto exceed = std::count_if(rows.begin(), rows.end(),
                                      [&](const ReplicaRow& r) { return std::abs(r.phi - rep.mean) > threshold; });
    TailRow tail;
    tail.t = t;
    tail.fraction = static_cast<double>(exceed) / R;
    tail.bound = 2.0 * std::exp(-t * t / 4.0);
    const double q = std::min(tail.bound, 1.0);
    tail.slack = 3.0 * std::sqrt(q * (1.0 - q) / R);
    tail.pass = tail.fraction <= tail.bound + tail.slack;
    rep.pass = rep.pass && tail.pass;
    rep.tails.push_back(tail);
  }
  return rep;
}

double limit_pressure(const DisorderSource& source, double beta, const FieldSpec& field) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, DistributionSpec>)
          return qcrem_pressure(concave_hull(s), beta, field).value;
        else
          return quantum_nonhier_pressure(s, beta, field).pressure;
      },
      source);
}

std::vector<ConvergenceRow> convergence_study(const DisorderSource& source, const FieldSpec& field,
                                              double beta, std::span<const int> sizes,
                                              std::size_t replicas, std::uint64_t seed,
                                              const ReplicaOptions& options,
                                              std::vector<ReplicaRow>* table) {
  const double limit = limit_pressure(source, beta, field);
  std::vector<ConvergenceRow> out;
  for (int N : sizes) {
    const auto rows = sample_replicas(source, field, N, beta, replicas, derive_seed(seed, 4, static_cast<std::uint64_t>(N)), options);
    ConvergenceRow row;
    row.N = N;
    std::tie(row.mean, row.stddev) = mean_and_stddev(rows);
    row.limit = limit;
    row.gap = std::abs(row.mean - limit);
    out.push_back(row);
    if (table) table->insert(table->end(), rows.begin(), rows.end());
  }
  return out;
}

void write_replica_csv(std::ostream& os, const std::vector<ReplicaRow>& rows) {
  os << "replica,N,beta,gamma_or_law,phi_N\n";
  const auto old = os.precision(17);
  for (const auto& r : rows)
    os << r.replica << ',' << r.N << ',' << r.beta << ',' << r.field_label << ',' << r.phi << '\n';
  os.precision(old);
}

}  // namespace qgrem
