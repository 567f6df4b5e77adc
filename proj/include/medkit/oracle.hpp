#ifndef MEDKIT_ORACLE_HPP
#define MEDKIT_ORACLE_HPP

#include "medkit/certify.hpp"

namespace medkit {

struct SingularL : std::runtime_error {
  explicit SingularL(const std::string& msg) : std::runtime_error(msg) {}
};

// Independent numerical maximizer with a rigorous dual bound:
// K = M_hat + eps I dominates every p_j rho_j, so Tr K bounds any strategy.
struct OracleResult {
  Povm povm;
  double p_lower = 0.0;   // achieved success probability
  double p_upper = 1.0;   // dual bound
  int iterations = 0;
  bool converged = false;

  double gap() const { return p_upper - p_lower; }
};

// Fixed-point iteration Pi_j <- L^{-1/2} W_j Pi_j W_j L^{-1/2} with
// W_j = p_j rho_j and L = sum_k W_k Pi_k W_k, from the uniform POVM.
// Stops once p_upper - p_lower <= gap; returns the best iterate with
// converged = false otherwise. A collapsed L triggers perturbed restarts
// (up to 5) before SingularL is thrown.
OracleResult med_fixed_point(const TwoSetEnsemble& e, int max_iters, double gap);

// Secondary oracle: monotone ascent alternating a projected gradient step
// (completeness restored by S^{-1/2} Pi_j S^{-1/2}) with exact pairwise
// redistributions of Pi_j + Pi_k. Deterministic for a fixed seed.
OracleResult random_restart_ascent(const TwoSetEnsemble& e, int restarts, uint64_t seed);

// Dual bound for an arbitrary POVM: Tr M_hat + d * eps with
// eps = max_j max-eig(p_j rho_j - M_hat), clamped at zero.
double dual_bound(const TwoSetEnsemble& e, const Povm& p);

}  // namespace medkit

#endif
