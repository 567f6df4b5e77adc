#include "medkit/ensembles.hpp"

#include <cmath>

#include "medkit/eig.hpp"

namespace medkit {

namespace {

bool is_unitary(const CMat& u, double tol) {
  return (u.adjoint() * u - CMat::identity(u.dim())).fnorm() <= tol;
}

bool is_density(const CMat& rho, double tol) {
  if (rho.herm_residual() > tol) return false;
  if (std::abs(rho.trace() - cplx(1.0, 0.0)) > tol) return false;
  return psd_check(rho, tol);
}

}  // namespace

void TwoSetEnsemble::validate() const {
  if (d < 1) throw std::invalid_argument("ensemble: dim must be >= 1");
  if (U.empty() || U_prime.empty())
    throw std::invalid_argument("ensemble: each set needs at least one unitary (n, n' >= 1)");
  if (eta < 0.0 || eta_prime < 0.0)
    throw std::invalid_argument("ensemble: priors must be nonnegative");
  if (std::abs(n() * eta + n_prime() * eta_prime - 1.0) > 1e-12)
    throw PriorMismatch("ensemble: n*eta + n'*eta' must equal 1");
  if (!is_density(rho1, 1e-9) || !is_density(rho1_prime, 1e-9))
    throw std::invalid_argument("ensemble: seeds must be density matrices");
  if (rho1.dim() != d || rho1_prime.dim() != d)
    throw DimensionMismatch("ensemble: seed dimension mismatch");
  auto check_set = [&](const std::vector<CMat>& us, const char* name) {
    if ((us[0] - CMat::identity(d)).fnorm() > 1e-12)
      throw std::invalid_argument(std::string("ensemble: first unitary of ") + name +
                                  " must be the identity");
    for (const auto& u : us) {
      if (u.dim() != d) throw DimensionMismatch("ensemble: unitary dimension mismatch");
      if (!is_unitary(u, 1e-10))
        throw std::invalid_argument(std::string("ensemble: non-unitary element in ") + name);
    }
  };
  check_set(U, "first set");
  check_set(U_prime, "second set");
}

std::pair<std::vector<CMat>, std::vector<CMat>> make_states(const TwoSetEnsemble& e) {
  e.validate();
  std::vector<CMat> first, second;
  first.reserve(e.U.size());
  second.reserve(e.U_prime.size());
  for (const auto& u : e.U) first.push_back(conj_by(u, e.rho1));
  for (const auto& u : e.U_prime) second.push_back(conj_by(u, e.rho1_prime));
  return {std::move(first), std::move(second)};
}

std::vector<CMat> all_states(const TwoSetEnsemble& e) {
  auto [first, second] = make_states(e);
  first.insert(first.end(), second.begin(), second.end());
  return first;
}

CMat zrotation(double angle) {
  CMat u(2);
  u(0, 0) = std::exp(cplx(0.0, -angle / 2.0));
  u(1, 1) = std::exp(cplx(0.0, angle / 2.0));
  return u;
}

TwoSetEnsemble build_qubit_zrotation_ensemble(double eta, double eta_prime,
                                              const GeneralizedBlochState& seed,
                                              const GeneralizedBlochState& seed_prime,
                                              const std::vector<double>& angles,
                                              const std::vector<double>& angles_prime) {
  if (seed.m != 1 || seed_prime.m != 1)
    throw std::invalid_argument("qubit ensemble: seeds must be m=1 Bloch states");
  if (angles.empty() || angles_prime.empty() || angles[0] != 0.0 || angles_prime[0] != 0.0)
    throw std::invalid_argument("qubit ensemble: first angle of each set must be 0");
  const GammaSet g = dirac_gammas(1);
  TwoSetEnsemble e;
  e.d = 2;
  e.eta = eta;
  e.eta_prime = eta_prime;
  e.rho1 = bloch_to_state(seed, g);
  e.rho1_prime = bloch_to_state(seed_prime, g);
  for (double a : angles) e.U.push_back(zrotation(a));
  for (double a : angles_prime) e.U_prime.push_back(zrotation(a));
  e.U[0] = CMat::identity(2);
  e.U_prime[0] = CMat::identity(2);
  if (std::abs(e.n() * eta + e.n_prime() * eta_prime - 1.0) > 1e-12)
    throw PriorMismatch("qubit ensemble: n*eta + n'*eta' must equal 1");
  e.validate();
  return e;
}

CMat spinor_rotation(const GammaSet& g, const std::vector<std::vector<double>>& theta) {
  const int k = static_cast<int>(g.gammas.size());
  if (static_cast<int>(theta.size()) != k)
    throw DimensionMismatch("spinor_rotation: theta table must be (2m+1)x(2m+1)");
  CMat h(g.dim());
  for (int i = 0; i < k; ++i) {
    if (static_cast<int>(theta[i].size()) != k)
      throw DimensionMismatch("spinor_rotation: theta table must be (2m+1)x(2m+1)");
    for (int j = i + 1; j < k; ++j) {
      if (theta[i][j] == 0.0) continue;
      // i*g_i*g_j is Hermitian for i != j
      h += theta[i][j] * (cplx(0.0, 1.0) * (g.gammas[i] * g.gammas[j]));
    }
  }
  if (h.herm_residual() > kHermTol * std::max(h.fnorm(), 1.0))
    throw NonHermitianExponent("spinor_rotation: assembled exponent is not Hermitian");
  return expi_herm(h);
}

TwoSetEnsemble build_spinor_ensemble(const GammaSet& g, double eta, double eta_prime,
                                     const GeneralizedBlochState& seed,
                                     const GeneralizedBlochState& seed_prime,
                                     const std::vector<std::vector<std::vector<double>>>& thetas,
                                     const std::vector<std::vector<std::vector<double>>>& thetas_prime) {
  auto all_zero = [](const std::vector<std::vector<double>>& t) {
    for (const auto& row : t)
      for (double x : row)
        if (x != 0.0) return false;
    return true;
  };
  if (thetas.empty() || thetas_prime.empty() || !all_zero(thetas[0]) || !all_zero(thetas_prime[0]))
    throw std::invalid_argument("spinor ensemble: theta table of state 1 must be all zero");
  TwoSetEnsemble e;
  e.d = g.dim();
  e.eta = eta;
  e.eta_prime = eta_prime;
  e.rho1 = bloch_to_state(seed, g);
  e.rho1_prime = bloch_to_state(seed_prime, g);
  for (const auto& t : thetas) e.U.push_back(spinor_rotation(g, t));
  for (const auto& t : thetas_prime) e.U_prime.push_back(spinor_rotation(g, t));
  e.U[0] = CMat::identity(e.d);
  e.U_prime[0] = CMat::identity(e.d);
  e.validate();
  return e;
}

IrreducibilityReport irreducibility_test(const std::vector<CMat>& unitaries) {
  if (unitaries.empty()) throw std::invalid_argument("irreducibility_test: empty set");
  const int d = unitaries.front().dim();
  const int D = d * d;
  // X commutes with every generator iff it commutes with the whole generated
  // group, so the commutant is the joint null space of X -> U X - X U over
  // the generating set alone. Gram matrix S = sum_j T_j^dag T_j.
  CMat s(D);
  for (const auto& u : unitaries) {
    if (u.dim() != d) throw DimensionMismatch("irreducibility_test: dimension mismatch");
    CMat t(D);  // vec(UX - XU) = (U (x) I - I (x) U^T) vec(X), row-major vec
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l) {
            cplx val = 0.0;
            if (j == l) val += u(i, k);
            if (i == k) val -= u(l, j);  // (I (x) U^T)_{ij,kl} = delta_ik U_lj
            if (val != cplx(0.0, 0.0)) t(i * d + j, k * d + l) = val;
          }
    s += t.adjoint() * t;
  }
  const EigenPair ep = eig_herm(s);
  // singular values of the stacked map are sqrt(eigenvalues of S)
  const double smax = std::sqrt(std::max(ep.values.back(), 0.0));
  const double cut = 1e-8 * std::max(smax, 1e-300);
  int nullity = 0;
  for (double v : ep.values)
    if (std::sqrt(std::max(v, 0.0)) <= cut) ++nullity;
  IrreducibilityReport r;
  r.commutant_dim = nullity;
  r.is_irreducible = (nullity == 1);
  return r;
}

IrreducibilityReport invariant_index_sets(const std::vector<CMat>& unitaries, const GammaSet& g) {
  IrreducibilityReport r = irreducibility_test(unitaries);
  if (!unitaries.empty() && unitaries.front().dim() != g.dim())
    throw DimensionMismatch("invariant_index_sets: gamma dimension mismatch");
  const double tol = 1e-10 * std::sqrt(static_cast<double>(g.dim()));
  for (int i = 0; i < static_cast<int>(g.gammas.size()); ++i) {
    bool invariant = true;
    for (const auto& u : unitaries) {
      if ((conj_by(u, g.gammas[i]) - g.gammas[i]).fnorm() > tol) {
        invariant = false;
        break;
      }
    }
    (invariant ? r.invariant_indices : r.variant_indices).push_back(i);
  }
  return r;
}

}  // namespace medkit
