#include "qgrem/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "qgrem/classical.hpp"
#include "qgrem/errors.hpp"
#include "qgrem/io.hpp"
#include "qgrem/nonhier.hpp"
#include "qgrem/quantum.hpp"
#include "qgrem/verify.hpp"

namespace qgrem::cli {

using io::format_number;

std::string RunConfig::canonical() const {
  std::ostringstream os;
  os << "subcommand=" << subcommand << ";model=" << model_path << ";field=" << field
     << ";beta=" << beta_grid << ";gamma=" << gamma_grid << ";N=" << sizes << ";replicas=" << replicas
     << ";seed=" << (seed ? std::to_string(*seed) : "none") << ";verify_tolerance="
     << format_number(verify_tolerance) << ";sign_tolerance=" << format_number(sign_tolerance)
     << ";exact_max_N=" << exact_max_N;
  return os.str();
}

std::string manifest_line(const RunConfig& config) {
  return "# manifest: config_hash=" + io::config_hash(config.canonical()) +
         " seed=" + (config.seed ? std::to_string(*config.seed) : "none") +
         " subcommand=" + config.subcommand;
}

namespace {

std::vector<double> grid_or_usage(const std::string& text, const char* name) {
  try {
    return io::parse_grid(text);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--") + name + ": " + e.what());
  }
}

struct FieldPoint {
  FieldSpec field;
  std::string label;
  double gamma = 0.0;
};

/// Constant fields from the Γ-grid, or the single law given with --field.
std::vector<FieldPoint> field_points(const RunConfig& config) {
  std::vector<FieldPoint> out;
  if (!config.field.empty()) {
    auto f = io::parse_field(config.field);
    const double g = is_constant(f) ? std::get<ConstantField>(f).gamma : 0.0;
    out.push_back({f, is_constant(f) ? format_number(g) : field_label(f), g});
    return out;
  }
  for (double g : grid_or_usage(config.gamma_grid, "gamma")) out.push_back({ConstantField{g}, format_number(g), g});
  return out;
}

std::string phase_string(const std::vector<BlockPhase>& phases) {
  std::string s;
  for (std::size_t i = 0; i < phases.size(); ++i) {
    if (i) s += '|';
    s += phases[i] == BlockPhase::Classical ? 'C' : 'P';
  }
  return s;
}

std::string chain_string(const Chain& chain) {
  std::string s;
  for (std::size_t i = 0; i < chain.order.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(chain.order[i] + 1);
  }
  return s;
}

const DistributionSpec& hierarchical_or_throw(const DisorderSource& source, const char* cmd) {
  if (!std::holds_alternative<DistributionSpec>(source))
    throw ValidationError(std::string(cmd) + " needs a hierarchical (step or piecewise_linear) model");
  return std::get<DistributionSpec>(source);
}

QuantumPressureResult quantum_limit(const DistributionSpec& spec, const ConcaveHull& hull, double beta,
                                    const FieldSpec& field) {
  return spec.kind == DistributionKind::Step ? qgrem_pressure(hull, beta, field)
                                             : qcrem_pressure(hull, beta, field);
}

}  // namespace

int run_pressure(const RunConfig& config, std::ostream& out) {
  const auto source = io::load_model(config.model_path);
  const auto betas = grid_or_usage(config.beta_grid, "beta");
  const auto fields = field_points(config);
  const auto& spec = hierarchical_or_throw(source, "pressure");
  const auto hull = concave_hull(spec);

  out << manifest_line(config) << '\n';
  out << "beta,gamma_or_law,classical,quantum,argmax,block_phases\n";
  for (double beta : betas) {
    for (const auto& fp : fields) {
      const auto q = quantum_limit(spec, hull, beta, fp.field);
      out << format_number(beta) << ',' << fp.label << ',' << format_number(classical_pressure(hull, beta)) << ','
          << format_number(q.value) << ',' << q.argmax_index << ',' << phase_string(q.block_phases) << '\n';
    }
  }
  return kOk;
}

int run_nonhier(const RunConfig& config, std::ostream& out) {
  const auto source = io::load_model(config.model_path);
  if (!std::holds_alternative<NonHierModel>(source))
    throw ValidationError("nonhier needs a model with subset weights");
  const auto& model = std::get<NonHierModel>(source);
  const auto betas = grid_or_usage(config.beta_grid, "beta");
  const auto fields = field_points(config);
  const Chain greedy = greedy_chain(model);
  const auto greedy_hull = concave_hull(chain_grem(model, greedy).profile());

  out << manifest_line(config) << '\n';
  out << "beta,gamma_or_law,classical,quantum,argmax_D,greedy_chain,greedy_quantum\n";
  for (double beta : betas) {
    const auto classical = classical_nonhier_pressure(model, beta);
    for (const auto& fp : fields) {
      const auto q = quantum_nonhier_pressure(model, beta, fp.field);
      out << format_number(beta) << ',' << fp.label << ',' << format_number(classical.pressure) << ','
          << format_number(q.pressure) << ",\"" << subset_key(q.argmax) << "\"," << chain_string(greedy) << ','
          << format_number(qgrem_pressure(greedy_hull, beta, fp.field).value) << '\n';
    }
  }
  return kOk;
}

int run_phase_diagram(const RunConfig& config, std::ostream& grid, std::ostream& lines) {
  const auto source = io::load_model(config.model_path);
  const auto& spec = hierarchical_or_throw(source, "phase-diagram");
  if (!config.field.empty() && !is_constant(io::parse_field(config.field)))
    throw ValidationError("phase-diagram needs a constant field law");
  const auto betas = grid_or_usage(config.beta_grid, "beta");
  const auto gammas = grid_or_usage(config.gamma_grid, "gamma");
  const auto hull = concave_hull(spec);

  grid << manifest_line(config) << '\n';
  grid << "beta,gamma,pressure,m_z\n";
  for (double beta : betas) {
    for (double gamma : gammas) {
      const double value = quantum_limit(spec, hull, beta, ConstantField{gamma}).value;
      const double mz = beta > 0.0 ? magnetization(hull, beta, gamma) : 0.0;
      grid << format_number(beta) << ',' << format_number(gamma) << ',' << format_number(value) << ','
           << format_number(mz) << '\n';
    }
  }

  lines << manifest_line(config) << '\n';
  lines << "beta,kind,index,value,order\n";
  const auto table = partial_pressures(hull, betas.empty() ? 0.0 : betas.front());
  // A continuous profile has one glass transition, where its steepest segment freezes.
  const std::size_t glass_lines = spec.kind == DistributionKind::Step ? table.size() : std::min<std::size_t>(1, table.size());
  for (std::size_t l = 0; l < glass_lines; ++l)
    if (std::isfinite(table[l].freezing_beta))
      lines << format_number(table[l].freezing_beta) << ",glass," << l + 1 << ','
            << format_number(table[l].freezing_beta) << ",second\n";
  for (double beta : betas) {
    if (!(beta > 0.0)) continue;
    const auto transitions = transition_scan(hull, beta);
    for (std::size_t i = 0; i < transitions.size(); ++i)
      lines << format_number(beta) << ",magnetic," << i + 1 << ',' << format_number(transitions[i].gamma) << ','
            << (transitions[i].order == TransitionOrder::First ? "first" : "second") << '\n';
  }
  return kOk;
}

int run_verify(const RunConfig& config, std::ostream& table, std::ostream& report) {
  if (!config.seed) throw UsageError("verify requires --seed");
  const std::uint64_t seed = *config.seed;
  const auto source = io::load_model(config.model_path);
  const auto betas = grid_or_usage(config.beta_grid, "beta");
  const auto fields = field_points(config);
  std::vector<int> sizes;
  try {
    sizes = io::parse_int_list(config.sizes);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--N: ") + e.what());
  }
  if (config.replicas < 2) throw UsageError("--replicas must be at least 2");
  std::sort(sizes.begin(), sizes.end());
  const double beta = betas.front();
  const FieldSpec& field = fields.front().field;

  ReplicaOptions options;
  options.auto_exact_max_N = config.exact_max_N;

  bool ok = true;
  std::vector<ReplicaRow> rows;
  const auto study = convergence_study(source, field, beta, sizes, config.replicas, seed, options, &rows);
  table << manifest_line(config) << '\n';
  write_replica_csv(table, rows);

  for (const auto& r : study)
    report << "INFO convergence N=" << r.N << " mean=" << format_number(r.mean) << " stddev="
           << format_number(r.stddev) << " limit=" << format_number(r.limit) << " gap=" << format_number(r.gap)
           << '\n';
  const auto& last = study.back();
  const bool limit_ok = last.gap <= config.verify_tolerance;
  ok = ok && limit_ok;
  report << (limit_ok ? "PASS" : "FAIL") << " limit N=" << last.N << " gap=" << format_number(last.gap)
         << " tolerance=" << format_number(config.verify_tolerance) << '\n';
  if (study.size() > 1)
    report << "INFO trend gap(N=" << study.front().N << ")=" << format_number(study.front().gap) << " gap(N="
           << last.N << ")=" << format_number(last.gap) << '\n';

  if (config.replicas >= 200) {
    for (int N : sizes) {
      const auto rep = concentration_check(source, field, N, beta, config.replicas, derive_seed(seed, 5, N), options);
      for (const auto& t : rep.tails)
        report << (t.pass ? "PASS" : "FAIL") << " concentration N=" << N << " t=" << format_number(t.t)
               << " fraction=" << format_number(t.fraction) << " bound=" << format_number(t.bound + t.slack)
               << '\n';
      ok = ok && rep.pass;
    }
  } else {
    report << "SKIP concentration (needs >= 200 replicas)\n";
  }

  const int sign_N = std::min(8, sizes.back());
  std::mt19937_64 rng(derive_seed(seed, 6, 0));
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto inst = sample_instance(source, field, sign_N, derive_seed(seed, 7, static_cast<std::uint64_t>(k)));
    const std::uint64_t mask = rng() & ((std::uint64_t{1} << sign_N) - 1);
    worst = std::max(worst, sign_invariance_check(inst, beta, mask));
  }
  const bool sign_ok = worst <= config.sign_tolerance;
  ok = ok && sign_ok;
  report << (sign_ok ? "PASS" : "FAIL") << " sign-invariance N=" << sign_N
         << " max_relative_deviation=" << format_number(worst) << " tolerance=" << format_number(config.sign_tolerance)
         << '\n';
  return ok ? kOk : kAssertion;
}

namespace {

void error_line(std::ostream& err, const char* kind, const std::string& message) {
  err << "error: kind=" << kind << " message=\"" << message << "\"\n";
}

}  // namespace

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Limiting free energies and phase diagrams of quantum GREM/CREM spin glasses"};
  app.require_subcommand(1);
  RunConfig config;
  std::uint64_t seed_value = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--model", config.model_path, "Model JSON file")->required();
    sub->add_option("--field", config.field, "constant:G | discrete:FILE | gaussian:m,s | empirical:FILE");
    sub->add_option("--beta", config.beta_grid, "Inverse-temperature grid start:stop:count");
    sub->add_option("--gamma", config.gamma_grid, "Constant-field grid start:stop:count");
    sub->add_option("--out", config.out, "Output CSV (default: stdout)");
  };
  auto* pressure = app.add_subcommand("pressure", "Classical and quantum limiting pressures on a grid");
  add_common(pressure);
  auto* nonhier = app.add_subcommand("nonhier", "Non-hierarchical GREM pressures and greedy chain");
  add_common(nonhier);
  auto* phase = app.add_subcommand("phase-diagram", "Pressure grid and transition lines");
  add_common(phase);
  phase->add_option("--transitions", config.transitions_out, "Transition CSV (default: <out>.transitions.csv)");
  auto* verify = app.add_subcommand("verify", "Finite-N checks against the limit formulas");
  add_common(verify);
  verify->add_option("--N", config.sizes, "Comma-separated system sizes");
  verify->add_option("--replicas", config.replicas, "Disorder replicas per size");
  auto* seed_opt = verify->add_option("--seed", seed_value, "Reproducibility seed");
  verify->add_option("--tolerance", config.verify_tolerance, "Allowed gap to the limit at the largest N");
  verify->add_option("--sign-tolerance", config.sign_tolerance, "Allowed relative sign-flip deviation");
  verify->add_option("--exact-max-N", config.exact_max_N, "Largest N solved by dense diagonalization");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  if (*seed_opt) config.seed = seed_value;

  try {
    std::ofstream file;
    std::ostream* target = &out;
    if (!config.out.empty()) {
      file.open(config.out);
      if (!file) throw ValidationError("cannot write '" + config.out + "'");
      target = &file;
    }
    if (pressure->parsed()) {
      config.subcommand = "pressure";
      return run_pressure(config, *target);
    }
    if (nonhier->parsed()) {
      config.subcommand = "nonhier";
      return run_nonhier(config, *target);
    }
    if (phase->parsed()) {
      config.subcommand = "phase-diagram";
      if (config.out.empty() && config.transitions_out.empty()) {
        std::ostringstream lines;
        const int rc = run_phase_diagram(config, *target, lines);
        *target << '\n' << lines.str();
        return rc;
      }
      const std::string path =
          config.transitions_out.empty() ? config.out + ".transitions.csv" : config.transitions_out;
      std::ofstream lines(path);
      if (!lines) throw ValidationError("cannot write '" + path + "'");
      return run_phase_diagram(config, *target, lines);
    }
    config.subcommand = "verify";
    return run_verify(config, *target, err);
  } catch (const UsageError& e) {
    error_line(err, "usage", e.what());
    return kUsage;
  } catch (const CapacityError& e) {
    error_line(err, "capacity", e.what());
    return kCapacity;
  } catch (const ValidationError& e) {
    error_line(err, "validation", e.what());
    return kValidation;
  } catch (const DomainError& e) {
    error_line(err, "validation", e.what());
    return kValidation;
  }
}

}  // namespace qgrem::cli
