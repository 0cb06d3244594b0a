#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qgrem/model.hpp"
#include "qgrem/nonhier.hpp"

namespace qgrem {

/// Dense eigensolves are allowed up to this many spins (2^14 = 16384 states).
inline constexpr int kMaxExactSpins = 14;
/// Matrix-free trace estimation up to this many spins.
inline constexpr int kMaxStochasticSpins = 20;

using DisorderSource = std::variant<DistributionSpec, NonHierModel>;

/// One disorder realization of H_N = U - B on {-1,1}^N.
///
/// Configuration index bit (N - j) holds spin j (1-based), so the first k spins
/// form the prefix `index >> (N - k)` and the lexicographic overlap of two
/// configurations is the length of their common leading bits.
struct FiniteInstance {
  int N = 0;
  Eigen::VectorXd potential;      // U(σ), 2^N entries
  Eigen::VectorXd field_weights;  // b_1..b_N
  std::uint64_t seed = 0;

  std::size_t dimension() const { return std::size_t{1} << N; }
};

/// Block boundaries ⌈x_k N⌉; throws if any block is empty.
std::vector<int> block_boundaries(std::span<const double> x, int N);

/// Step representation of a profile at resolution N (piecewise-linear specs are
/// sampled at the grid i/N).
DistributionSpec step_at_resolution(const DistributionSpec& spec, int N);

/// Hierarchical or non-hierarchical Gaussian potential.
Eigen::VectorXd sample_potential(const DisorderSource& source, int N, std::uint64_t seed);
Eigen::VectorXd sample_field(const FieldSpec& field, int N, std::uint64_t seed);

/// Deterministic for fixed (source, field, N, seed). Potential and field use
/// independent streams derived from the seed.
FiniteInstance sample_instance(const DisorderSource& source, const FieldSpec& field, int N,
                               std::uint64_t seed);

/// Seed for replica r of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t replica);

/// Normalized lexicographic overlap of configurations a, b.
double lexicographic_overlap(std::uint64_t a, std::uint64_t b, int N);

Eigen::MatrixXd dense_hamiltonian(const FiniteInstance& inst);
using ProbeBlock = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
/// y = H x without forming H; one probe per column.
void apply_hamiltonian(const FiniteInstance& inst, const ProbeBlock& x, ProbeBlock& y);

Eigen::VectorXd exact_spectrum(const FiniteInstance& inst);
/// (1/N) ln Σ_i exp(-β λ_i), anchored at the smallest eigenvalue.
double pressure_from_spectrum(const Eigen::VectorXd& eigenvalues, double beta, int N);
double exact_pressure(const FiniteInstance& inst, double beta);

/// (1/N) ln Σ_σ exp(-β U(σ)).
double diagonal_pressure(const FiniteInstance& inst, double beta);
/// (1/N) Σ_j ln 2cosh(β b_j).
double field_only_pressure(const FiniteInstance& inst, double beta);
/// Gibbs variational bound from the field-only state: field_only_pressure minus
/// β times the configuration average of U, divided by N. Its disorder mean is the
/// field-only pressure; a single instance can sit above or below it.
double field_gibbs_bound(const FiniteInstance& inst, double beta);

struct StochasticOptions {
  std::size_t probes = 64;
  std::size_t max_degree = 2000;
  /// Target relative trace error from truncating the expansion: sup error × dimension
  /// must stay below tolerance × exp(-β Σ|b_j|), a lower bound on the shifted trace.
  double tolerance = 1e-4;
  std::uint64_t seed = 0x5eed;
};

struct StochasticResult {
  double pressure = 0.0;
  /// One standard error of the probe mean, mapped to the pressure scale.
  double error = 0.0;
  std::size_t degree = 0;
  /// False when max_degree was too small for the requested tolerance.
  bool converged = true;
};

/// Hutchinson trace of exp(-βH) with Rademacher probes and a Chebyshev expansion
/// of exp on the Gershgorin interval [min U - Σ|b|, max U + Σ|b|].
StochasticResult stochastic_pressure(const FiniteInstance& inst, double beta,
                                     const StochasticOptions& options = {});

/// Diagonal of exp(-βH) via a full eigendecomposition.
Eigen::VectorXd diagonal_of_gibbs_operator(const FiniteInstance& inst, double beta);

/// Flip the sign of b_j for every bit j set in `flip_mask` and return the max
/// relative deviation of the diagonal of exp(-βH).
double sign_invariance_check(const FiniteInstance& inst, double beta, std::uint64_t flip_mask);

enum class PressureMethod { Exact, Stochastic, Auto };

struct ReplicaOptions {
  PressureMethod method = PressureMethod::Auto;
  /// Auto uses the dense path up to this N.
  int auto_exact_max_N = 10;
  /// Keep the field weights of replica 0 for every replica.
  bool freeze_field = false;
  StochasticOptions stochastic{};
};

double finite_pressure(const FiniteInstance& inst, double beta, const ReplicaOptions& options);

struct ReplicaRow {
  std::size_t replica = 0;
  int N = 0;
  double beta = 0.0;
  std::string field_label;
  double phi = 0.0;
};

/// Φ_N over `replicas` disorder samples; replica r uses derive_seed(seed, 0, r).
std::vector<ReplicaRow> sample_replicas(const DisorderSource& source, const FieldSpec& field, int N,
                                        double beta, std::size_t replicas, std::uint64_t seed,
                                        const ReplicaOptions& options = {});

struct TailRow {
  double t = 0.0;
  double fraction = 0.0;
  double bound = 0.0;  // 2 exp(-t²/4)
  double slack = 0.0;  // 3σ binomial
  bool pass = true;
};

struct ConcentrationReport {
  int N = 0;
  double beta = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<TailRow> tails;
  bool pass = true;
};

/// Empirical tails P(|Φ_N - mean| > tβ/√N) for t = 1,2,3 against 2e^{-t²/4}.
/// The field is held fixed across replicas. Requires replicas >= 200.
ConcentrationReport concentration_check(const DisorderSource& source, const FieldSpec& field, int N,
                                        double beta, std::size_t replicas, std::uint64_t seed,
                                        ReplicaOptions options = {});

struct ConvergenceRow {
  int N = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double limit = 0.0;
  double gap = 0.0;
};

/// Limiting pressure for a disorder source (quantum CREM/GREM or non-hierarchical formula).
double limit_pressure(const DisorderSource& source, double beta, const FieldSpec& field);

std::vector<ConvergenceRow> convergence_study(const DisorderSource& source, const FieldSpec& field,
                                              double beta, std::span<const int> sizes,
                                              std::size_t replicas, std::uint64_t seed,
                                              const ReplicaOptions& options = {},
                                              std::vector<ReplicaRow>* table = nullptr);

std::string field_label(const FieldSpec& field);

/// CSV with header replica,N,beta,gamma_or_law,phi_N and 17 significant digits.
void write_replica_csv(std::ostream& os, const std::vector<ReplicaRow>& rows);

}  // namespace qgrem
