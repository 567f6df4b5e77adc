// med: minimum-error discrimination toolkit for two-set similarity-transformed
// ensembles. Subcommands: solve, certify, oracle, simulate, scan.
//
// Exit codes: 0 success/certified, 1 input error, 2 certification failure,
// 3 oracle non-convergence.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "medkit/closedform.hpp"
#include "medkit/io.hpp"
#include "medkit/oracle.hpp"
#include "medkit/simulate.hpp"

namespace {

using namespace medkit;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitCertification = 2;
constexpr int kExitOracle = 3;

CertTolerances env_tolerances() {
  const char* v = std::getenv("MEDKIT_TOL");
  if (v && std::string(v) == "strict") return CertTolerances::strict();
  return CertTolerances{};
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

void print_certificate(std::ostream& os, const OptimalityCertificate& cert) {
  os << "certificate: " << (cert.certified() ? "Certified" : "Rejected");
  if (cert.degenerate_first || cert.degenerate_second) os << " (degenerate)";
  os << "\n";
  for (const auto& [k, v] : cert.residuals) os << "  " << k << " = " << fmt(v) << "\n";
}

void print_report(std::ostream& os, const SolveReport& rep) {
  os << "p_opt = " << fmt(rep.p_opt) << "\n";
  os << "branch = " << branch_name(rep.branch);
  if (!rep.branch_detail.empty()) os << " (" << rep.branch_detail << ")";
  os << "\n";
  if (rep.quadratic) {
    const QuadraticInfo& q = *rep.quadratic;
    os << "quadratic: A = " << fmt(q.A) << ", B = " << fmt(q.B) << ", C = " << fmt(q.C)
       << ", root = " << fmt(q.root) << "\n";
    if (std::isfinite(q.discrepancy) && q.discrepancy > 0.0)
      os << "printed-coefficient root differs by " << fmt(q.discrepancy) << "\n";
  }
  os << "weights:";
  for (size_t k = 0; k < rep.povm.weights.size(); ++k) {
    if (static_cast<int>(k) == rep.povm.n_first) os << " |";
    os << " " << fmt(rep.povm.weights[k]);
  }
  os << "\n";
  print_certificate(os, rep.certificate);
}

int cmd_solve(const std::string& ensemble_path, const std::string& out_path,
              const std::string& povm_out) {
  const TwoSetEnsemble e = load_ensemble(ensemble_path);
  SolveReport rep;
  try {
    rep = solve_auto(e);
  } catch (const NoBranchCertifies& ex) {
    std::cerr << ex.what() << "\n";
    return kExitCertification;
  }
  print_report(std::cout, rep);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    print_report(out, rep);
  }
  if (!povm_out.empty()) {
    std::ofstream out(povm_out);
    out << povm_to_json(rep.povm) << "\n";
  }
  return rep.certificate.certified() ? kExitOk : kExitCertification;
}

int cmd_certify(const std::string& ensemble_path, const std::string& povm_path, double p) {
  const TwoSetEnsemble e = load_ensemble(ensemble_path);
  const Povm povm = load_povm(povm_path);
  const OptimalityCertificate cert = certificate(e, povm, p, env_tolerances());
  print_certificate(std::cout, cert);
  return cert.certified() ? kExitOk : kExitCertification;
}

int cmd_oracle(const std::string& ensemble_path, double gap, int max_iters, uint64_t seed,
               bool ascent) {
  const TwoSetEnsemble e = load_ensemble(ensemble_path);
  OracleResult res = ascent ? random_restart_ascent(e, 8, seed)
                            : med_fixed_point(e, max_iters, gap);
  std::cout << "p_lower = " << fmt(res.p_lower) << "\n"
            << "p_upper = " << fmt(res.p_upper) << "\n"
            << "gap = " << fmt(res.gap()) << "\n"
            << "iterations = " << res.iterations << "\n"
            << "converged = " << (res.converged ? "yes" : "no") << "\n";
  return res.converged ? kExitOk : kExitOracle;
}

int cmd_simulate(const std::string& ensemble_path, const std::string& povm_path,
                 long long trials, uint64_t seed) {
  const TwoSetEnsemble e = load_ensemble(ensemble_path);
  const Povm povm = load_povm(povm_path);
  const SimResult res = monte_carlo_success(e, povm, trials, seed);
  std::cout << "trials = " << res.trials << "\n"
            << "successes = " << res.successes << "\n"
            << "p_hat = " << fmt(res.p_hat) << "\n"
            << "stderr = " << fmt(res.stderr_hat) << "\n"
            << "seed = " << res.seed << "\n";
  return kExitOk;
}

int cmd_scan(const std::string& ensemble_path, const std::string& param, double start,
             double stop, int steps, const std::string& out_path, bool with_oracle,
             bool keep_going) {
  if (steps < 2) {
    std::cerr << "scan: steps must be >= 2\n";
    return kExitInput;
  }
  if (!(start < stop)) {
    std::cerr << "scan: start must be < stop\n";
    return kExitInput;
  }
  const TwoSetEnsemble base = load_ensemble(ensemble_path);

  std::ostringstream csv;
  csv << param << ",p_opt,branch";
  if (with_oracle) csv << ",oracle_p,gap";
  csv << ",status\n";

  bool any_failed = false;
  for (int s = 0; s < steps; ++s) {
    const double x = start + (stop - start) * s / (steps - 1);
    TwoSetEnsemble e = base;
    if (param == "eta") {
      e.eta = x;
      // keep n*eta + n'*eta' = 1
      e.eta_prime = (1.0 - e.n() * x) / e.n_prime();
    } else if (param == "eta_prime") {
      e.eta_prime = x;
      e.eta = (1.0 - e.n_prime() * x) / e.n();
    } else {
      std::cerr << "scan: unsupported parameter \"" << param << "\" (use eta or eta_prime)\n";
      return kExitInput;
    }
    csv << fmt(x) << ",";
    try {
      e.validate();
      const SolveReport rep = solve_auto(e);
      csv << fmt(rep.p_opt) << "," << branch_name(rep.branch);
      if (with_oracle) {
        const OracleResult orc = med_fixed_point(e, 20000, 1e-7);
        csv << "," << fmt(orc.p_lower) << "," << fmt(orc.gap());
      }
      csv << ",ok\n";
    } catch (const std::exception& ex) {
      any_failed = true;
      csv << "," << "";
      if (with_oracle) csv << ",,";
      csv << ",infeasible\n";
      if (!keep_going) {
        std::cerr << "scan: point " << param << " = " << x << " failed: " << ex.what() << "\n";
        return kExitInput;
      }
    }
  }

  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(out_path);
    out << csv.str();
  }
  return any_failed ? kExitInput : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimum-error discrimination between two similarity-transformed state sets"};
  app.require_subcommand(1);

  std::string ensemble_path, povm_path, out_path, povm_out, param = "eta";
  double p = 0.0, gap = 1e-7, start = 0.0, stop = 0.0;
  int max_iters = 20000, steps = 0;
  long long trials = 100000;
  uint64_t seed = 1;
  bool with_oracle = false, keep_going = false, ascent = false;

  auto* solve = app.add_subcommand("solve", "closed-form solve + certificate");
  solve->add_option("ensemble", ensemble_path, "ensemble JSON file")->required();
  solve->add_option("--out", out_path, "also write the report to this file");
  solve->add_option("--povm-out", povm_out, "write the optimal POVM as JSON");

  auto* certify = app.add_subcommand("certify", "check optimality of a POVM at a given p");
  certify->add_option("ensemble", ensemble_path)->required();
  certify->add_option("povm", povm_path, "POVM JSON file")->required();
  certify->add_option("p", p, "claimed optimal success probability")->required();

  auto* oracle = app.add_subcommand("oracle", "numerical maximizer with dual bound");
  oracle->add_option("ensemble", ensemble_path)->required();
  oracle->add_option("--gap", gap, "target dual gap");
  oracle->add_option("--max-iters", max_iters);
  oracle->add_option("--seed", seed);
  oracle->add_flag("--ascent", ascent, "use the projected-ascent oracle instead");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo success estimate");
  simulate->add_option("ensemble", ensemble_path)->required();
  simulate->add_option("povm", povm_path)->required();
  simulate->add_option("--trials", trials);
  simulate->add_option("--seed", seed);

  auto* scan = app.add_subcommand("scan", "sweep a parameter, emit CSV");
  scan->add_option("ensemble", ensemble_path)->required();
  scan->add_option("--param", param, "eta or eta_prime (eta_prime resp. eta is recomputed "
                                     "to keep n*eta + n'*eta' = 1)");
  scan->add_option("--start", start)->required();
  scan->add_option("--stop", stop)->required();
  scan->add_option("--steps", steps)->required();
  scan->add_option("--out", out_path, "CSV output path (default: stdout)");
  scan->add_flag("--oracle", with_oracle, "add oracle columns");
  scan->add_flag("--keep-going", keep_going, "emit a status row for infeasible points");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(ensemble_path, out_path, povm_out);
    if (certify->parsed()) return cmd_certify(ensemble_path, povm_path, p);
    if (oracle->parsed()) return cmd_oracle(ensemble_path, gap, max_iters, seed, ascent);
    if (simulate->parsed()) return cmd_simulate(ensemble_path, povm_path, trials, seed);
    if (scan->parsed())
      return cmd_scan(ensemble_path, param, start, stop, steps, out_path, with_oracle,
                      keep_going);
  } catch (const ParseError& ex) {
    std::cerr << ex.what() << "\n";
    return kExitInput;
  } catch (const SingularL& ex) {
    std::cerr << ex.what() << "\n";
    return kExitOracle;
  } catch (const std::exception& ex) {
    std::cerr << ex.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
