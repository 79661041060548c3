#pragma once

// The four batch commands behind the bqm executable. Each writes its report
// to an ostream and returns the process exit code:
//   0  success (check / measure: the quantity or event is physical)
//   1  input error (malformed JSON, invalid config, dimension mismatch,
//      non-diagonalizable operator, sampling a non-physical report, ...)
//   2  check / measure only: the quantity or event is not physical

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <thread>
#include <vector>

#include "bqm/cli/config.hpp"
#include "bqm/dynamics.hpp"
#include "bqm/measurement.hpp"
#include "bqm/scenarios.hpp"
#include "bqm/sip_space.hpp"
#include "bqm/spectral.hpp"
#include "bqm/states.hpp"

namespace bqm::cli {

inline constexpr std::string_view kToolVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

enum class Command { Check, Measure, Evolve, Scan };

inline std::optional<Command> parse_command(std::string_view name) {
  if (name == "check") return Command::Check;
  if (name == "measure") return Command::Measure;
  if (name == "evolve") return Command::Evolve;
  if (name == "scan") return Command::Scan;
  return std::nullopt;
}

constexpr std::string_view to_string(Command c) noexcept {
  switch (c) {
    case Command::Check: return "check";
    case Command::Measure: return "measure";
    case Command::Evolve: return "evolve";
    case Command::Scan: return "scan";
  }
  return "?";
}

/// Command-line values that take precedence over the config file. env_tol
/// (from BQM_TOL) only applies when neither --tol nor tolerances.verdict is
/// given.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<double> env_tol;
};

/// Shortest round-trip decimal form; -0 prints as 0.
inline std::string num(double x) {
  if (x == 0.0) x = 0.0;
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc{}) return "nan";
  return {buf.data(), end};
}

/// 64-bit FNV-1a, used to fingerprint the effective configuration.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << v;
  return os.str();
}

namespace detail {

struct Job {
  Command command;
  JobConfig cfg;
  std::string hash;
};

struct ResolvedOperator {
  std::optional<QubitScenario> scenario;
  SpectralDecomposition decomposition;
  std::string label;
};

inline ResolvedOperator resolve_operator(const JobConfig& cfg) {
  if (!cfg.op.scenario && !cfg.op.matrix) throw Error(ErrorKind::InvalidConfig, "this command needs an \"operator\"");
  const PSpace space = cfg.space();
  if (cfg.op.scenario) {
    const std::string& name = *cfg.op.scenario;
    if (name == "oblique") {
      CVector x = cfg.op.oblique_x.value_or(CVector::Unit(2, 0));
      CVector y = cfg.op.oblique_y.value_or(CVector::Ones(2));
      require_dim(x.size(), space.dim(), "operator.x");
      require_dim(y.size(), space.dim(), "operator.y");
      if (cfg.auto_normalize) {
        x = normalize(space, x);
        y = normalize(space, y);
      }
      QubitScenario s = oblique_qubit(space, x, y, cfg.op.lambda1, cfg.op.lambda2, cfg.tol);
      SpectralDecomposition d = s.hamiltonian();
      return {std::move(s), std::move(d), name};
    }
    QubitScenario s = pauli(space, name.back() - '0', cfg.tol);
    SpectralDecomposition d = s.hamiltonian();
    return {std::move(s), std::move(d), name};
  }
  require_square(*cfg.op.matrix, space.dim(), "operator.matrix");
  return {std::nullopt, decompose(*cfg.op.matrix, cfg.tol), "matrix"};
}

inline StateFunctional<PSpace> resolve_state(const JobConfig& cfg) {
  if (!cfg.state) throw Error(ErrorKind::InvalidConfig, "this command needs a \"state\"");
  const PSpace space = cfg.space();
  std::vector<StateFunctional<PSpace>::Term> terms;
  for (const auto& t : cfg.state->terms) {
    require_dim(t.vector.size(), space.dim(), "state vector");
    terms.push_back({t.weight, t.vector});
  }
  return StateFunctional<PSpace>(space, std::move(terms), cfg.tol, cfg.auto_normalize);
}

inline CVector pure_state_vector(const JobConfig& cfg) {
  if (!cfg.state) throw Error(ErrorKind::InvalidConfig, "this command needs a \"state\"");
  if (!cfg.state->is_pure()) throw Error(ErrorKind::InvalidConfig, "this command needs a pure state (\"vector\")");
  const CVector& x = cfg.state->terms.front().vector;
  require_dim(x.size(), cfg.dim, "state.vector");
  return x;
}

inline void write_preamble(std::ostream& out, const Job& job) {
  out << "# bqm " << kToolVersion << " schema=" << kSchemaVersion << " command=" << to_string(job.command)
      << " config_hash=" << job.hash << "\n";
}

inline std::string describe_space(const JobConfig& cfg) {
  return "dim=" + std::to_string(cfg.dim) + " p=" + num(cfg.p);
}

inline int run_check(const Job& job, std::ostream& out) {
  const JobConfig& cfg = job.cfg;
  const StateFunctional<PSpace> state = resolve_state(cfg);
  write_preamble(out, job);
  out << "space: " << describe_space(cfg) << "\n";
  out << "state: " << (state.is_point_state() ? "pure" : "mixture") << " terms=" << state.terms().size()
      << " renormalized=" << (state.renormalized() ? "true" : "false") << "\n";

  PhysicalityVerdict verdict;
  if (cfg.event) {
    out << "mode: event\n";
    verdict = is_physical_event(state, *cfg.event, cfg.tol, "P");
    const Complex value = evaluate(state, *cfg.event);
    out << "omega_re,omega_im\n" << num(value.real()) << "," << num(value.imag()) << "\n";
  } else {
    const ResolvedOperator op = resolve_operator(cfg);
    out << "mode: quantity\noperator: " << op.label << "\n";
    verdict = is_physical_quantity(state, op.decomposition, cfg.tol);
    out << "atom,eigenvalue_re,eigenvalue_im,omega_re,omega_im\n";
    for (std::size_t k = 0; k < op.decomposition.size(); ++k) {
      const Complex lambda = op.decomposition[k].eigenvalue;
      const Complex w = verdict.atom_values[k];
      out << k << "," << num(lambda.real()) << "," << num(lambda.imag()) << "," << num(w.real()) << ","
          << num(w.imag()) << "\n";
    }
    if (!verdict.exhaustive) out << "warning: more than " << kExhaustiveAtomLimit << " atoms, checked atoms and complements only\n";
    if (op.scenario && state.is_point_state()) {
      const bool cf = op.scenario->closed_form(state.terms().front().vector, cfg.tol.verdict);
      out << "closed_form: " << (cf ? "physical" : "not-physical") << "\n";
    }
  }
  out << "verdict: " << (verdict.is_physical() ? "physical" : "not-physical") << "\n";
  out << "violations: " << verdict.violations.size() << "\n";
  for (const Violation& v : verdict.violations) {
    out << "violation: " << v.label << " value=(" << num(v.value.real()) << "," << num(v.value.imag())
        << ") reason=" << to_string(v.reason) << "\n";
  }
  return verdict.is_physical() ? 0 : 2;
}

inline int run_measure(const Job& job, std::ostream& out) {
  const JobConfig& cfg = job.cfg;
  const PSpace space = cfg.space();
  const CVector x = pure_state_vector(cfg);
  const ResolvedOperator op = resolve_operator(cfg);
  const EigenBasis basis = eigen_basis(space, op.decomposition, cfg.tol);
  const MeasurementReport report = transition_probabilities(space, basis, x, cfg.tol, cfg.auto_normalize);

  std::vector<CollapseResult> draws;
  if (cfg.samples > 0) {
    std::mt19937_64 rng(cfg.seed);
    for (int i = 0; i < cfg.samples; ++i) draws.push_back(sample_collapse(space, report, basis, rng));
  }

  write_preamble(out, job);
  out << "# operator=" << op.label << " " << describe_space(cfg) << " physical=" << (report.physical ? "true" : "false")
      << " conserved=" << (report.conserved ? "true" : "false")
      << " renormalized=" << (report.renormalized ? "true" : "false") << " input_norm=" << num(report.input_norm)
      << "\n";
  out << "outcome_index,eigenvalue,prob_real,prob_imag,cumulative\n";
  double cumulative = 0.0;
  for (std::size_t k = 0; k < report.outcomes.size(); ++k) {
    const auto& o = report.outcomes[k];
    cumulative += o.raw_value.real();
    out << k << "," << num(o.eigenvalue) << "," << num(o.raw_value.real()) << "," << num(o.raw_value.imag()) << ","
        << num(cumulative) << "\n";
  }
  out << "expectation_real,expectation_imag,conservation_residual\n";
  out << num(report.expectation.real()) << "," << num(report.expectation.imag()) << ","
      << num(report.conservation_residual()) << "\n";
  if (!draws.empty()) {
    out << "# samples=" << draws.size() << " seed=" << cfg.seed << " rng=mt19937_64/53bit\n";
    out << "sample_index,outcome_index,eigenvalue\n";
    for (std::size_t i = 0; i < draws.size(); ++i) {
      out << i << "," << draws[i].outcome << "," << num(draws[i].eigenvalue) << "\n";
    }
  }
  return report.physical ? 0 : 2;
}

inline int run_evolve(const Job& job, std::ostream& out) {
  const JobConfig& cfg = job.cfg;
  if (!cfg.times) throw Error(ErrorKind::InvalidConfig, "evolve needs a \"times\" grid");
  const PSpace space = cfg.space();
  const CVector x0 = pure_state_vector(cfg);
  const ResolvedOperator op = resolve_operator(cfg);
  op.decomposition.require_real_spectrum(cfg.tol.real_spectrum, "evolve");
  std::optional<EigenBasis> basis;
  if (cfg.probabilities) basis = eigen_basis(space, op.decomposition, cfg.tol);

  std::ostringstream rows;
  const double initial_norm = space.norm(x0);
  double lo = initial_norm, hi = initial_norm;
  for (double t : cfg.times->values) {
    const CVector xt = evolve_state(op.decomposition, x0, t, cfg.tol);
    const double n = space.norm(xt);
    lo = std::min(lo, n);
    hi = std::max(hi, n);
    rows << num(t);
    for (Eigen::Index i = 0; i < xt.size(); ++i) rows << "," << num(xt[i].real()) << "," << num(xt[i].imag());
    rows << "," << num(n) << "," << num(n - initial_norm);
    if (basis) {
      const MeasurementReport r = transition_probabilities(space, *basis, xt, cfg.tol, /*auto_normalize=*/true);
      for (const auto& o : r.outcomes) rows << "," << num(o.raw_value.real()) << "," << num(o.raw_value.imag());
      rows << "," << (r.physical ? 1 : 0);
    }
    rows << "\n";
  }

  write_preamble(out, job);
  out << "# operator=" << op.label << " " << describe_space(cfg) << " norm_min=" << num(lo) << " norm_max=" << num(hi)
      << " norm_drift=" << (hi - lo > cfg.tol.unit ? "true" : "false") << "\n";
  out << "t";
  for (Eigen::Index i = 0; i < x0.size(); ++i) out << ",x" << i << "_re,x" << i << "_im";
  out << ",p_norm,norm_drift";
  if (basis) {
    for (std::size_t k = 0; k < basis->atom_eigenvalues.size(); ++k) out << ",prob" << k << "_re,prob" << k << "_im";
    out << ",physical";
  }
  out << "\n" << rows.str();
  return 0;
}

inline int run_scan(const Job& job, std::ostream& out) {
  const JobConfig& cfg = job.cfg;
  if (!cfg.sweep) throw Error(ErrorKind::InvalidConfig, "scan needs a \"sweep\" grid");
  if (cfg.dim != 2) throw Error(ErrorKind::DimensionMismatch, "scan parameterizes qubit states and needs dim = 2");
  const PSpace space = cfg.space();
  const ResolvedOperator op = resolve_operator(cfg);
  op.decomposition.require_real_spectrum(cfg.tol.real_spectrum, "scan");

  const int nt = cfg.sweep->theta_count;
  const int np = cfg.sweep->phi_count;
  const std::size_t total = static_cast<std::size_t>(nt) * static_cast<std::size_t>(np);
  std::vector<std::string> lines(total);
  std::vector<char> physical(total, 0);

  auto evaluate_point = [&](std::size_t idx) {
    const int i = static_cast<int>(idx / static_cast<std::size_t>(np));
    const int j = static_cast<int>(idx % static_cast<std::size_t>(np));
    const double theta = nt == 1 ? 0.0 : (std::numbers::pi / 2.0) * i / (nt - 1);
    const double phi = 2.0 * std::numbers::pi * j / np;
    CVector z(2);
    z << std::cos(theta), std::sin(theta) * std::exp(kI * phi);
    z = normalize(space, z);
    const PhysicalityVerdict v = is_physical_quantity(point_state(space, z, cfg.tol), op.decomposition, cfg.tol);
    physical[idx] = v.is_physical() ? 1 : 0;
    std::string line = num(theta) + "," + num(phi) + "," + num(z[0].real()) + "," + num(z[0].imag()) + "," +
                       num(z[1].real()) + "," + num(z[1].imag()) + "," + (v.is_physical() ? "1" : "0");
    if (op.scenario) {
      const ConditionValues c = op.scenario->condition_values(z);
      line += std::string(",") + (op.scenario->closed_form(z, cfg.tol.verdict) ? "1" : "0") + "," +
              num(c.plus.real()) + "," + num(c.minus.real()) + "," + num(c.plus.imag()) + "," + num(c.minus.imag());
    } else {
      line += ",,,,,";
    }
    lines[idx] = std::move(line);
  };

  // Results are stored by grid index, so the output does not depend on the
  // thread count or scheduling.
  unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, total / 64))));
  if (workers == 1) {
    for (std::size_t idx = 0; idx < total; ++idx) evaluate_point(idx);
  } else {
    std::vector<std::jthread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t idx = w; idx < total; idx += workers) evaluate_point(idx);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    pool.clear();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::size_t count = 0;
  for (char c : physical) count += static_cast<std::size_t>(c);
  write_preamble(out, job);
  out << "# operator=" << op.label << " " << describe_space(cfg) << " points=" << total << " physical=" << count << "\n";
  out << "theta,phi,u_re,u_im,v_re,v_im,verdict,closed_form,condition_value_plus,condition_value_minus,"
         "condition_imag_plus,condition_imag_minus\n";
  for (const std::string& line : lines) out << line << "\n";
  return 0;
}

}  // namespace detail

/// Parses the config text, applies overrides and runs the command. Errors
/// are reported on err as "error[Kind]: message" with exit code 1.
inline int run(Command command, std::string_view config_text, const Overrides& overrides, std::ostream& out,
               std::ostream& err) {
  try {
    Json root;
    try {
      root = Json::parse(config_text);
    } catch (const Json::parse_error& e) {
      err << "error[MalformedJson]: " << e.what() << "\n";
      return 1;
    }
    if (!root.is_object()) {
      err << "error[MalformedJson]: top-level value must be an object\n";
      return 1;
    }
    if (overrides.seed) root["seed"] = *overrides.seed;
    const bool config_tol = root.contains("tolerances") && root["tolerances"].is_object() &&
                            root["tolerances"].contains("verdict");
    if (overrides.tol) {
      root["tolerances"]["verdict"] = *overrides.tol;
    } else if (overrides.env_tol && !config_tol) {
      root["tolerances"]["verdict"] = *overrides.env_tol;
    }
    detail::Job job{command, parse_config(root), hex64(fnv1a64(root.dump()))};
    switch (command) {
      case Command::Check: return detail::run_check(job, out);
      case Command::Measure: return detail::run_measure(job, out);
      case Command::Evolve: return detail::run_evolve(job, out);
      case Command::Scan: return detail::run_scan(job, out);
    }
  } catch (const Error& e) {
    err << "error[" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return 1;
  } catch (const Json::exception& e) {
    err << "error[InvalidConfig]: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace bqm::cli
