#include "qgrem/nonhier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "qgrem/classical.hpp"
#include "qgrem/errors.hpp"

namespace qgrem {

NonHierModel NonHierModel::make(std::vector<double> lengths) {
  NonHierModel m;
  m.n = static_cast<int>(lengths.size());
  if (m.n < 1 || m.n > kMaxBlocks) throw ValidationError("non-hierarchical model: need 1..32 blocks");
  if (m.n > 20) throw CapacityError("non-hierarchical model: dense weight table limited to 20 blocks");
  m.lengths = std::move(lengths);
  m.weights.assign(std::size_t{1} << m.n, 0.0);
  return m;
}

double NonHierModel::length_of(Subset s) const {
  double acc = 0.0;
  for (int k = 0; k < n; ++k)
    if (s >> k & 1U) acc += lengths[static_cast<std::size_t>(k)];
  return acc;
}

std::vector<double> NonHierModel::cumulative_weights() const {
  std::vector<double> out = weights;
  for (int k = 0; k < n; ++k)
    for (Subset s = 0; s < out.size(); ++s)
      if (s >> k & 1U) out[s] += out[s ^ (Subset{1} << k)];
  return out;
}

void NonHierModel::validate() const {
  if (n < 1 || n > 20) throw ValidationError("non-hierarchical model: need 1..20 blocks");
  if (lengths.size() != static_cast<std::size_t>(n))
    throw ValidationError("non-hierarchical model: one length per block required");
  if (weights.size() != std::size_t{1} << n)
    throw ValidationError("non-hierarchical model: weight table must have 2^n entries");
  double total_length = 0.0;
  for (double l : lengths) {
    if (!(l > 0.0) || !std::isfinite(l)) throw ValidationError("block lengths must be positive");
    total_length += l;
  }
  if (std::abs(total_length - 1.0) > 1e-12) throw ValidationError("block lengths must sum to 1");
  if (weights[0] != 0.0) throw ValidationError("weight of the empty set must be 0");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("subset weights must be >= 0");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ValidationError("subset weights must sum to 1");
}

Subset Chain::prefix(std::size_t k) const {
  Subset s = 0;
  for (std::size_t i = 0; i < k; ++i) s |= Subset{1} << order[i];
  return s;
}

std::string subset_key(Subset s) {
  std::ostringstream os;
  bool first = true;
  for (int k = 0; k < kMaxBlocks; ++k) {
    if (!(s >> k & 1U)) continue;
    if (!first) os << ',';
    os << k + 1;
    first = false;
  }
  return os.str();
}

Subset parse_subset_key(const std::string& key, int n) {
  Subset s = 0;
  std::istringstream is(key);
  std::string tok;
  int prev = 0;
  while (std::getline(is, tok, ',')) {
    int idx = 0;
    try {
      std::size_t used = 0;
      idx = std::stoi(tok, &used);
      if (used != tok.size()) throw ValidationError("");
    } catch (const std::exception&) {
      throw ValidationError("bad subset key '" + key + "'");
    }
    if (idx < 1 || idx > n) throw ValidationError("subset key '" + key + "' names a block outside 1..n");
    if (idx <= prev) throw ValidationError("subset key '" + key + "' must be sorted ascending");
    prev = idx;
    s |= Subset{1} << (idx - 1);
  }
  if (s == 0) throw ValidationError("empty subset key");
  return s;
}

DistributionSpec ChainGrem::profile() const {
  return DistributionSpec::step(weights, endpoints, /*normalized=*/false);
}

namespace {

void check_chain(const NonHierModel& model, const Chain& chain) {
  Subset seen = 0;
  for (int b : chain.order) {
    if (b < 0 || b >= model.n) throw ValidationError("chain references a block outside 1..n");
    if (seen >> b & 1U) throw ValidationError("chain adds a block twice");
    seen |= Subset{1} << b;
  }
}

ChainGrem chain_grem_from(const std::vector<double>& cumulative, const NonHierModel& model,
                          const Chain& chain) {
  ChainGrem out;
  Subset prev = 0;
  double y = 0.0;
  for (int b : chain.order) {
    const Subset next = prev | Subset{1} << b;
    out.weights.push_back(std::max(0.0, cumulative[next] - cumulative[prev]));
    y += model.lengths[static_cast<std::size_t>(b)];
    out.endpoints.push_back(y);
    prev = next;
  }
  return out;
}

double pressure_of(const ChainGrem& g, double beta) {
  if (g.weights.empty()) return 0.0;
  return classical_pressure(concave_hull(g.profile()), beta);
}

std::vector<int> members(Subset s) {
  std::vector<int> out;
  for (int k = 0; k < kMaxBlocks; ++k)
    if (s >> k & 1U) out.push_back(k);
  return out;
}

/// min over chains ending at D; permutations visited in lexicographic order.
ChainOptimum min_over_chains(const std::vector<double>& cumulative, const NonHierModel& model,
                             Subset d, double beta) {
  Chain chain{members(d)};
  ChainOptimum best;
  best.chain = chain;
  best.pressure = pressure_of(chain_grem_from(cumulative, model, chain), beta);
  while (std::next_permutation(chain.order.begin(), chain.order.end())) {
    const double v = pressure_of(chain_grem_from(cumulative, model, chain), beta);
    if (v < best.pressure) {
      best.pressure = v;
      best.chain = chain;
    }
  }
  return best;
}

void check_capacity(const NonHierModel& model) {
  if (model.n > kMaxEnumerationBlocks)
    throw CapacityError("exhaustive chain enumeration is limited to n <= 10; use greedy_chain");
}

}  // namespace

ChainGrem chain_grem(const NonHierModel& model, const Chain& chain) {
  check_chain(model, chain);
  return chain_grem_from(model.cumulative_weights(), model, chain);
}

double chain_pressure(const NonHierModel& model, const Chain& chain, double beta) {
  return pressure_of(chain_grem(model, chain), beta);
}

ChainOptimum classical_nonhier_pressure(const NonHierModel& model, double beta) {
  model.validate();
  check_capacity(model);
  return min_over_chains(model.cumulative_weights(), model, model.full(), beta);
}

Chain greedy_chain(const NonHierModel& model) {
  model.validate();
  const auto cumulative = model.cumulative_weights();
  const Subset full = model.full();
  // Sorted-index lexicographic order on subsets: compare lowest differing block.
  auto lex_less = [](Subset a, Subset b) {
    const Subset diff = a ^ b;
    const Subset low = diff & (~diff + 1);
    return (a & low) != 0;
  };

  Chain chain;
  Subset current = 0;
  while (current != full) {
    const double base_w = cumulative[current];
    const double base_l = model.length_of(current);
    Subset best = full;
    double best_slope = -1.0;
    const Subset rest = full & ~current;
    // Every proper superset of `current` is current | r for a nonempty r ⊆ rest.
    for (Subset r = rest; r != 0; r = (r - 1) & rest) {
      const Subset t = current | r;
      const double slope = (cumulative[t] - base_w) / (model.length_of(t) - base_l);
      const double tol = 1e-12 * std::max(1.0, std::abs(slope));
      bool take = false;
      if (slope > best_slope + tol) {
        take = true;
      } else if (std::abs(slope - best_slope) <= tol) {
        const int pc_t = std::popcount(t);
        const int pc_b = std::popcount(best);
        take = pc_t > pc_b || (pc_t == pc_b && lex_less(t, best));
      }
      if (take) {
        best = t;
        best_slope = slope;
      }
    }
    for (int k : members(best & ~current)) chain.order.push_back(k);
    current = best;
  }
  return chain;
}

NonHierQuantumResult quantum_nonhier_pressure(const NonHierModel& model, double beta,
                                              const FieldSpec& field) {
  model.validate();
  check_capacity(model);
  const double p = paramagnetic_pressure(field, beta);
  const auto cumulative = model.cumulative_weights();
  NonHierQuantumResult best;
  best.pressure = p;  // D = ∅
  best.argmax = 0;
  for (Subset d = 1; d <= model.full(); ++d) {
    const double v = min_over_chains(cumulative, model, d, beta).pressure +
                     model.length_of(model.full() & ~d) * p;
    if (v > best.pressure) {
      best.pressure = v;
      best.argmax = d;
    }
  }
  return best;
}

}  // namespace qgrem
