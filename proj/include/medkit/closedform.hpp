#ifndef MEDKIT_CLOSEDFORM_HPP
#define MEDKIT_CLOSEDFORM_HPP

#include "medkit/certify.hpp"
#include "medkit/linalg.hpp"

namespace medkit {

struct NotIrreducible : std::runtime_error {
  explicit NotIrreducible(const std::string& msg) : std::runtime_error(msg) {}
};
struct WeightInfeasible : std::runtime_error {
  explicit WeightInfeasible(const std::string& msg) : std::runtime_error(msg) {}
};
struct Infeasible : std::runtime_error {
  explicit Infeasible(const std::string& msg) : std::runtime_error(msg) {}
};
struct NoBranchCertifies : std::runtime_error {
  explicit NoBranchCertifies(const std::string& msg) : std::runtime_error(msg) {}
};
struct GeometryUnsupported : std::runtime_error {
  explicit GeometryUnsupported(const std::string& msg) : std::runtime_error(msg) {}
};
struct ConditionAmbiguous : std::runtime_error {
  explicit ConditionAmbiguous(const std::string& msg) : std::runtime_error(msg) {}
};
// Raised only when the printed and derived reducible quadratics disagree AND
// certification cannot arbitrate between them; plain disagreement is
// reported through QuadraticInfo::discrepancy instead.
struct CoefficientMismatch : std::runtime_error {
  explicit CoefficientMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

enum class Branch {
  Irreducible,
  QubitCase1,
  QubitCase2,
  QubitCase3,
  QubitCase4,
  Special1,
  Special2,
  Special3,
  MQubitIrred,
  MQubitRed,
  DegenerateIdentity,  // guess the likelier set, Pi = I
  Fallback,
};

std::string branch_name(Branch b);

// Coefficients of the quadratic A p^2 + B p + C/4 = 0 whose larger root is
// p_opt in the generic reducible branch, with the printed-text variant kept
// alongside for the audit.
struct QuadraticInfo {
  double A = 0.0, B = 0.0, C = 0.0;  // derived coefficients (used by the solver)
  double root = 0.0;                 // chosen root
  double other_root = 0.0;
  double A_printed = 0.0, B_printed = 0.0, C_printed = 0.0;
  double root_printed = 0.0;         // larger root of the printed coefficients
  double discrepancy = 0.0;          // |root - root_printed|
};

struct SolveReport {
  double p_opt = 0.0;
  Branch branch = Branch::Fallback;
  std::string branch_detail;  // sub-branch / tie / finding notes
  Povm povm;
  OptimalityCertificate certificate;
  std::optional<QuadraticInfo> quadratic;
  std::optional<double> oracle_gap;  // filled by callers that cross-check
};

// Nonnegative weights for a linear equality system (typically the
// completeness relation). Among feasible solutions the max-min weight one is
// returned, so all states keep participating whenever possible.
struct WeightConstraintSystem {
  RMat A;
  std::vector<double> b;
  std::vector<bool> forced_zero;  // weights pinned to zero (excluded states)
  double tol = 1e-9;
};

WeightConstraintSystem completeness_system(const std::vector<CMat>& shapes, int dim,
                                           std::vector<bool> forced_zero = {});
std::vector<double> recover_weights(const WeightConstraintSystem& sys);

// p_opt = max(eta a_max d, eta' a'_max d) for irreducible generating sets.
SolveReport solve_irreducible(const TwoSetEnsemble& e);

// Qubit two-set solver for z-rotation-generated ensembles; enumerates the
// four case branches, certifies each candidate and returns the certified
// maximum.
SolveReport solve_qubit_two_sets(const TwoSetEnsemble& e);

// The three special-case piecewise formulas; falls back to
// solve_qubit_two_sets when no printed branch condition matches or the
// matching branch fails certification (recorded in branch_detail).
SolveReport solve_special_case(int which, const TwoSetEnsemble& e);

SolveReport solve_mqubit_irreducible(const TwoSetEnsemble& e, const GammaSet& g);
SolveReport solve_mqubit_reducible(const TwoSetEnsemble& e, const GammaSet& g);

// Dispatch on ensemble geometry (used by the CLI).
SolveReport solve_auto(const TwoSetEnsemble& e);

// Derived reducible-branch quadratic (bisection-free closed form) and the
// printed-text coefficients, for the audit. n0, np0, np1 are the shared
// invariant-subspace coordinates.
QuadraticInfo reducible_quadratic(double eta, double eta_prime, double b, double b_prime,
                                  double n0, double np0, double np1);

}  // namespace medkit

#endif
