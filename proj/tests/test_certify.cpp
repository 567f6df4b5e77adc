#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "medkit/certify.hpp"
#include "medkit/closedform.hpp"
#include "medkit/eig.hpp"
#include "helpers.hpp"

using namespace medkit;
using medkit::testing::bloch;

namespace {

// One mixed axial state against a three-state equatorial orbit; guessing the
// dominant state with Pi_1 = I is optimal at p = eta.
TwoSetEnsemble dominant_guess_ensemble() {
  return build_qubit_zrotation_ensemble(
      0.7, 0.1, bloch(0.5, {0.0, 0.0, 1.0}), bloch(1.0, {1.0, 0.0, 0.0}), {0.0},
      {0.0, 2.0 * M_PI / 3.0, 4.0 * M_PI / 3.0});
}

Povm identity_on_first(const TwoSetEnsemble& e) {
  std::vector<CMat> els(e.total(), CMat::zero(e.d));
  els[0] = CMat::identity(e.d);
  Povm p = Povm::from_elements(els, e.n());
  p.factorize();
  return p;
}

}  // namespace

TEST_CASE("guessing the dominant state certifies at p = eta") {
  const TwoSetEnsemble e = dominant_guess_ensemble();
  const Povm povm = identity_on_first(e);
  const OptimalityCertificate cert = certificate(e, povm, 0.7);
  CHECK(cert.certified());
  CHECK(cert.degenerate_first);
  // M = eta rho_1 for this measurement
  CHECK((cert.M - cplx(0.7, 0.0) * e.rho1).fnorm() < 1e-12);
  CHECK(success_probability(e, povm) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("wrong p values are rejected even for the right POVM") {
  const TwoSetEnsemble e = dominant_guess_ensemble();
  const Povm povm = identity_on_first(e);
  CHECK_FALSE(certificate(e, povm, 0.8).certified());
  CHECK_FALSE(certificate(e, povm, 0.69).certified());
}

TEST_CASE("orthogonal pure states are perfectly distinguishable") {
  const TwoSetEnsemble e = build_qubit_zrotation_ensemble(
      0.5, 0.5, bloch(1.0, {0.0, 0.0, 1.0}), bloch(1.0, {0.0, 0.0, -1.0}), {0.0}, {0.0});
  std::vector<CMat> els = {e.rho1, e.rho1_prime};  // the projectors themselves
  Povm povm = Povm::from_elements(els, 1);
  povm.factorize();
  const OptimalityCertificate cert = certificate(e, povm, 1.0);
  CHECK(cert.certified());
  CHECK(success_probability(e, povm) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("the uniform POVM does not certify a nontrivial ensemble") {
  const TwoSetEnsemble e = build_qubit_zrotation_ensemble(
      0.25, 0.25, bloch(1.0, {1.0, 0.0, 0.0}), bloch(1.0, {0.0, 1.0, 0.0}), {0.0, M_PI},
      {0.0, M_PI});
  std::vector<CMat> els(e.total(), cplx(1.0 / e.total(), 0.0) * CMat::identity(e.d));
  Povm povm = Povm::from_elements(els, e.n());
  povm.factorize();
  const double p = success_probability(e, povm);
  CHECK(p == doctest::Approx(0.25).epsilon(1e-12));  // random guessing
  CHECK_FALSE(certificate(e, povm, p).certified());
}

TEST_CASE("certificates are covariant under a global basis change") {
  const TwoSetEnsemble e = build_qubit_zrotation_ensemble(
      0.25, 0.25, bloch(1.0, {1.0, 0.0, 0.0}), bloch(1.0, {0.0, 1.0, 0.0}), {0.0, M_PI},
      {0.0, M_PI});
  const SolveReport rep = solve_qubit_two_sets(e);
  REQUIRE(rep.certificate.certified());

  // conjugate the whole problem by a fixed unitary
  const CMat sy(2, {0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0});
  const CMat v = expi_herm(cplx(0.4, 0.0) * sy);
  TwoSetEnsemble rot = e;
  rot.rho1 = conj_by(v, e.rho1);
  rot.rho1_prime = conj_by(v, e.rho1_prime);
  for (auto& u : rot.U) u = v * u * v.adjoint();
  for (auto& u : rot.U_prime) u = v * u * v.adjoint();
  Povm povm = rep.povm;
  for (auto& el : povm.elements) el = conj_by(v, el);
  povm.factorize();

  const OptimalityCertificate cert = certificate(rot, povm, rep.p_opt);
  CHECK(cert.certified());
  CHECK((cert.M - conj_by(v, rep.certificate.M)).fnorm() < 1e-10);
}

TEST_CASE("residual map always carries the full set of keys") {
  const TwoSetEnsemble e = dominant_guess_ensemble();
  const OptimalityCertificate cert = certificate(e, identity_on_first(e), 0.7);
  for (const char* key : {"completeness", "povm_psd", "tau_psd", "tau_trace", "slackness",
                          "M_invariance", "p_consistency"})
    CHECK(cert.residuals.count(key) == 1);
}

TEST_CASE("strict tolerances still accept an exact construction") {
  const TwoSetEnsemble e = dominant_guess_ensemble();
  const OptimalityCertificate cert =
      certificate(e, identity_on_first(e), 0.7, CertTolerances::strict());
  CHECK(cert.certified());
}

TEST_CASE("irreducible optimum has a scalar operator M") {
  // mutually unbiased generating sets acting irreducibly on the qubit
  const CMat id = CMat::identity(2);
  const CMat sx(2, {0.0, 1.0, 1.0, 0.0});
  const CMat sy(2, {0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0});
  const CMat sz(2, {1.0, 0.0, 0.0, -1.0});
  TwoSetEnsemble e;
  e.d = 2;
  e.eta = e.eta_prime = 1.0 / 6.0;
  const GammaSet g = dirac_gammas(1);
  e.rho1 = bloch_to_state(bloch(1.0, {0.0, 0.0, 1.0}), g);
  e.rho1_prime = bloch_to_state(bloch(1.0, {1.0, 0.0, 0.0}), g);
  e.U = {id, sx, sz};
  e.U_prime = {id, sy, sz};
  const SolveReport rep = solve_irreducible(e);
  REQUIRE(rep.certificate.certified());
  const double alpha = rep.p_opt / e.d;
  CHECK((rep.certificate.M - cplx(alpha, 0.0) * CMat::identity(e.d)).fnorm() <= 1e-9);
}
