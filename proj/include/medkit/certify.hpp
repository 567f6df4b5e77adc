#ifndef MEDKIT_CERTIFY_HPP
#define MEDKIT_CERTIFY_HPP

#include <map>
#include <optional>

#include "medkit/ensembles.hpp"
#include "medkit/povm.hpp"

namespace medkit {

struct DegeneratePrior : std::runtime_error {
  explicit DegeneratePrior(const std::string& msg) : std::runtime_error(msg) {}
};

// Residual tolerances for a certificate to be accepted.
struct CertTolerances {
  double completeness = 1e-9;
  double povm_psd = 1e-10;
  double tau_psd = 1e-9;
  double tau_trace = 1e-9;
  double slackness = 1e-9;
  double M_invariance = 1e-9;
  double p_consistency = 1e-9;

  static CertTolerances strict() {
    CertTolerances t;
    t.completeness = 1e-10;
    t.tau_psd = 1e-10;
    t.tau_trace = 1e-10;
    t.slackness = 1e-10;
    t.M_invariance = 1e-10;
    t.p_consistency = 1e-10;
    return t;
  }
};

enum class CertStatus { Certified, Rejected };

// Numerical check of M = p_j rho_j + (p - p_j) tau_j with tau_j PSD and
// trace one, plus completeness, slackness and the invariance of M under the
// generating unitaries. These conditions are sufficient, so a certificate
// that passes proves p is the optimum.
struct OptimalityCertificate {
  CMat M;
  std::vector<CMat> tau, tau_prime;
  double alpha = 0.0;                    // Tr M / d
  double beta = 0.0;                     // qubit: Tr(M sigma_z)/2
  std::vector<double> beta_i;            // m-qubit: Tr(M gamma_i)/2^m
  std::optional<double> c, c_prime;      // conjugate-state radii, when defined
  std::map<std::string, double> residuals;
  CertStatus status = CertStatus::Rejected;
  bool degenerate_first = false;         // p == eta (Pi = I branch)
  bool degenerate_second = false;

  bool certified() const { return status == CertStatus::Certified; }
  double worst_margin() const;           // max residual/tolerance over the map
};

struct ConjugatePair {
  std::vector<CMat> tau, tau_prime;
  bool degenerate_first = false;
  bool degenerate_second = false;
};

// p = eta sum_j Tr(rho_j Pi_j) + eta' sum_j Tr(rho'_j Pi'_j)
double success_probability(const TwoSetEnsemble& e, const Povm& p);

// M = eta sum Pi_i rho_i + eta' sum Pi'_i rho'_i (Hermitian at an optimum)
CMat build_M(const TwoSetEnsemble& e, const Povm& p);

// tau_j = (M - p_j rho_j)/(p - p_j); sets with p == prior are flagged
// degenerate and skipped.
ConjugatePair conjugate_states(const CMat& m, const TwoSetEnsemble& e, double p);

OptimalityCertificate certificate(const TwoSetEnsemble& e, const Povm& p, double p_opt,
                                  const CertTolerances& tol = CertTolerances{});

std::string certificate_report(const OptimalityCertificate& c);

}  // namespace medkit

#endif
