#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qgrem/model.hpp"
#include "qgrem/quantum.hpp"

namespace qgrem {

/// Subset of blocks {0..n-1} as a bitmask.
using Subset = std::uint32_t;

inline constexpr int kMaxBlocks = 32;
/// Exhaustive chain enumeration bound (10! chains).
inline constexpr int kMaxEnumerationBlocks = 10;

/// Non-hierarchical GREM: block lengths L_k and subset weights a_J.
struct NonHierModel {
  int n = 0;
  std::vector<double> lengths;
  /// Indexed by subset mask; size 2^n, weights[0] == 0.
  std::vector<double> weights;

  static NonHierModel make(std::vector<double> lengths);
  double& weight(Subset s) { return weights[s]; }
  double weight(Subset s) const { return weights[s]; }
  Subset full() const { return n == 32 ? ~Subset{0} : (Subset{1} << n) - 1; }
  double length_of(Subset s) const;
  /// ã_J = Σ_{I ⊆ J} a_I for every J (subset-sum transform).
  std::vector<double> cumulative_weights() const;
  void validate() const;
};

/// Nested subsets built one block at a time; `order[i]` is the block added at step i+1.
struct Chain {
  std::vector<int> order;

  Subset prefix(std::size_t k) const;
  Subset terminal() const { return prefix(order.size()); }
};

/// "1,3" style key of a subset (1-based, ascending).
std::string subset_key(Subset s);
Subset parse_subset_key(const std::string& key, int n);

struct ChainGrem {
  std::vector<double> weights;    // a_k^S
  std::vector<double> endpoints;  // y_k^S
  /// Step profile (unnormalized unless the chain is full and the weights sum to one).
  DistributionSpec profile() const;
};

ChainGrem chain_grem(const NonHierModel& model, const Chain& chain);

/// Classical pressure of the GREM assigned to `chain`.
double chain_pressure(const NonHierModel& model, const Chain& chain, double beta);

struct ChainOptimum {
  double pressure = 0.0;
  Chain chain;
};

/// min over all n! full chains; first minimizer in lexicographic order.
ChainOptimum classical_nonhier_pressure(const NonHierModel& model, double beta);

/// Greedy maximal-slope construction, completed in ascending block order.
Chain greedy_chain(const NonHierModel& model);

struct NonHierQuantumResult {
  double pressure = 0.0;
  Subset argmax = 0;
};

/// max over D of [min over chains ending at D of Φ_D(β,S)] + L(D^c) p(β,𝔟).
NonHierQuantumResult quantum_nonhier_pressure(const NonHierModel& model, double beta,
                                              const FieldSpec& field);

}  // namespace qgrem
