#ifndef MEDKIT_ENSEMBLES_HPP
#define MEDKIT_ENSEMBLES_HPP

#include "medkit/blochdirac.hpp"
#include "medkit/cmat.hpp"

namespace medkit {

struct PriorMismatch : std::runtime_error {
  explicit PriorMismatch(const std::string& msg) : std::runtime_error(msg) {}
};
struct NonHermitianExponent : std::runtime_error {
  explicit NonHermitianExponent(const std::string& msg) : std::runtime_error(msg) {}
};

// Two sets of equiprobable similarity-transformed states:
// rho_j = U_j rho1 U_j^dag with prior eta each, primed likewise with eta'.
// n*eta + n'*eta' = 1.
struct TwoSetEnsemble {
  int d = 0;
  double eta = 0.0;
  double eta_prime = 0.0;
  CMat rho1, rho1_prime;
  std::vector<CMat> U;        // U[0] = I
  std::vector<CMat> U_prime;  // U_prime[0] = I

  int n() const { return static_cast<int>(U.size()); }
  int n_prime() const { return static_cast<int>(U_prime.size()); }
  int total() const { return n() + n_prime(); }

  // prior of the k-th state in the flat ordering (unprimed first)
  double prior(int k) const { return k < n() ? eta : eta_prime; }

  void validate() const;  // throws on invariant violation
};

struct IrreducibilityReport {
  int commutant_dim = 0;
  bool is_irreducible = false;
  std::vector<int> invariant_indices;  // S_I, over gamma generators (0-based)
  std::vector<int> variant_indices;    // S_V
};

// rho_j = U_j rho1 U_j^dag for both sets, flat list per set
std::pair<std::vector<CMat>, std::vector<CMat>> make_states(const TwoSetEnsemble& e);
std::vector<CMat> all_states(const TwoSetEnsemble& e);  // unprimed then primed

CMat zrotation(double angle);  // exp(-i angle sigma_z / 2)

TwoSetEnsemble build_qubit_zrotation_ensemble(double eta, double eta_prime,
                                              const GeneralizedBlochState& seed,
                                              const GeneralizedBlochState& seed_prime,
                                              const std::vector<double>& angles,
                                              const std::vector<double>& angles_prime);

// theta_tables: one (2m+1)x(2m+1) antisymmetric table per state (upper
// triangle read); U_j = exp(i sum_{i<k} theta_ik g_i g_k). Table of state 1
// must be all zero.
TwoSetEnsemble build_spinor_ensemble(const GammaSet& g, double eta, double eta_prime,
                                     const GeneralizedBlochState& seed,
                                     const GeneralizedBlochState& seed_prime,
                                     const std::vector<std::vector<std::vector<double>>>& thetas,
                                     const std::vector<std::vector<std::vector<double>>>& thetas_prime);

CMat spinor_rotation(const GammaSet& g, const std::vector<std::vector<double>>& theta);

// Commutant dimension of {X : U X = X U for all U}, via the null space of
// the stacked commutator maps over the d^2 operator space. Irreducible iff
// the commutant is the scalars (Schur).
IrreducibilityReport irreducibility_test(const std::vector<CMat>& unitaries);

// Splits gamma indices into invariant (U g U^dag = g for every U) and
// variant sets; commutant fields filled in as well.
IrreducibilityReport invariant_index_sets(const std::vector<CMat>& unitaries, const GammaSet& g);

}  // namespace medkit

#endif
