#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgrem::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kValidation = 2,
  kAssertion = 3,
  kCapacity = 4,
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string subcommand;
  std::string model_path;
  /// Field law; empty means a constant field taken from the Γ-grid.
  std::string field;
  std::string beta_grid = "1:1:1";
  std::string gamma_grid = "0:0:1";
  std::string sizes = "6,8,10,12";
  std::size_t replicas = 400;
  std::optional<std::uint64_t> seed;
  std::string out;
  /// Second CSV for phase-diagram transition lines; defaults to <out>.transitions.csv.
  std::string transitions_out;
  /// run_verify: allowed |mean Φ_N - limit| at the largest N.
  double verify_tolerance = 0.15;
  /// run_verify: allowed relative deviation in the sign-invariance check.
  double sign_tolerance = 1e-8;
  /// run_verify: dense eigensolves up to this N, stochastic traces above.
  int exact_max_N = 10;

  /// Stable text form used for the manifest hash.
  std::string canonical() const;
};

/// `# manifest: config_hash=... seed=...` line.
std::string manifest_line(const RunConfig& config);

/// One row per (β, Γ) grid point, or per β for a non-constant law:
/// beta,gamma_or_law,classical,quantum,argmax,block_phases
int run_pressure(const RunConfig& config, std::ostream& out);

/// Non-hierarchical model table:
/// beta,gamma_or_law,classical,quantum,argmax_D,greedy_chain,greedy_quantum
int run_nonhier(const RunConfig& config, std::ostream& out);

/// Grid CSV beta,gamma,pressure,m_z and transition CSV
/// beta,kind,index,value,order (kind = magnetic|glass).
int run_phase_diagram(const RunConfig& config, std::ostream& grid, std::ostream& lines);

/// Convergence, concentration and sign-invariance checks. Writes the replica CSV to
/// `table` and one PASS/FAIL line per check to `report`; returns kAssertion on failure.
int run_verify(const RunConfig& config, std::ostream& table, std::ostream& report);

/// Full command-line entry point: parses argv, runs, maps errors to exit codes.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace qgrem::cli
