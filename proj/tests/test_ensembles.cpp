#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "medkit/eig.hpp"
#include "medkit/ensembles.hpp"
#include "helpers.hpp"

using namespace medkit;
using medkit::testing::bloch;

TEST_CASE("z-rotation by pi flips the x component of a Bloch vector") {
  const GammaSet g = dirac_gammas(1);
  const CMat rho = bloch_to_state(bloch(1.0, {1.0, 0.0, 0.0}), g);
  const CMat rotated = conj_by(zrotation(M_PI), rho);
  const GeneralizedBlochState s = state_to_bloch(rotated, g);
  CHECK(s.n[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(s.n[1]) < 1e-12);
  CHECK(std::abs(s.n[2]) < 1e-12);
}

TEST_CASE("trine ensemble places states at 120-degree spacing on the equator") {
  const auto e = build_qubit_zrotation_ensemble(
      1.0 / 6.0, 1.0 / 6.0, bloch(1.0, {1.0, 0.0, 0.0}), bloch(1.0, {0.0, 1.0, 0.0}),
      {0.0, 2.0 * M_PI / 3.0, 4.0 * M_PI / 3.0}, {0.0, 2.0 * M_PI / 3.0, 4.0 * M_PI / 3.0});
  const GammaSet g = dirac_gammas(1);
  const auto [first, second] = make_states(e);
  REQUIRE(first.size() == 3);
  for (int j = 0; j < 3; ++j) {
    const GeneralizedBlochState s = state_to_bloch(first[j], g);
    const double angle = 2.0 * M_PI * j / 3.0;
    CHECK(s.n[0] == doctest::Approx(std::cos(angle)).epsilon(1e-10));
    CHECK(s.n[1] == doctest::Approx(std::sin(angle)).epsilon(1e-10));
    CHECK(std::abs(s.n[2]) < 1e-10);
  }
}

TEST_CASE("conjugated states keep the seed spectrum") {
  const auto e = build_qubit_zrotation_ensemble(
      0.2, 0.05, bloch(0.7, {0.3, 0.0, 0.8}), bloch(0.4, {0.0, 1.0, 0.5}),
      {0.0, M_PI / 2.0, M_PI, 3.0 * M_PI / 2.0}, {0.0, M_PI / 2.0, M_PI, 3.0 * M_PI / 2.0});
  const std::vector<double> want1 = eig_herm(e.rho1).values;
  const std::vector<double> want2 = eig_herm(e.rho1_prime).values;
  for (const CMat& rho : make_states(e).first) {
    const std::vector<double> got = eig_herm(rho).values;
    for (size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want1[i]).epsilon(1e-12));
  }
  for (const CMat& rho : make_states(e).second) {
    const std::vector<double> got = eig_herm(rho).values;
    for (size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want2[i]).epsilon(1e-12));
  }
}

TEST_CASE("prior normalization n eta + n' eta' = 1 is enforced") {
  CHECK_THROWS_AS(build_qubit_zrotation_ensemble(0.18, 0.17, bloch(1.0, {1.0, 0.0, 0.0}),
                                                 bloch(1.0, {0.0, 1.0, 0.0}),
                                                 {0.0, M_PI, 2.0 * M_PI / 3.0},
                                                 {0.0, M_PI, 2.0 * M_PI / 3.0}),
                  PriorMismatch);
}

TEST_CASE("prior helper follows the flat state ordering") {
  const auto e = build_qubit_zrotation_ensemble(0.3, 0.2, bloch(1.0, {1.0, 0.0, 0.0}),
                                                bloch(1.0, {0.0, 1.0, 0.0}), {0.0, M_PI},
                                                {0.0, M_PI});
  CHECK(e.prior(0) == 0.3);
  CHECK(e.prior(1) == 0.3);
  CHECK(e.prior(2) == 0.2);
  CHECK(e.prior(3) == 0.2);
  CHECK(all_states(e).size() == 4);
}

TEST_CASE("a theta_12 spinor table reproduces a z rotation") {
  const GammaSet g = dirac_gammas(1);
  std::vector<std::vector<double>> theta(3, std::vector<double>(3, 0.0));
  theta[0][1] = M_PI / 4.0;  // couples gamma_1 (sigma_x) and gamma_2 (sigma_y)
  const CMat u = spinor_rotation(g, theta);
  const CMat want = zrotation(M_PI / 2.0);
  // equal up to a global phase; compare the conjugation action instead
  const CMat probe(2, {0.2, cplx(0.3, -0.1), cplx(0.3, 0.1), 0.8});
  CHECK((conj_by(u, probe) - conj_by(want, probe)).fnorm() < 1e-12);
}

TEST_CASE("spinor theta tables must be antisymmetric-shaped and zero for state 1") {
  const GammaSet g = dirac_gammas(1);
  CHECK_THROWS_AS(spinor_rotation(g, {{0.0, 1.0}}), DimensionMismatch);
  std::vector<std::vector<double>> zero(3, std::vector<double>(3, 0.0));
  std::vector<std::vector<double>> nonzero = zero;
  nonzero[0][1] = 0.5;
  // the first state of each set is the seed itself, so its table must be zero
  CHECK_THROWS(build_spinor_ensemble(g, 0.25, 0.25, bloch(1.0, {1.0, 0.0, 0.0}),
                                     bloch(1.0, {0.0, 1.0, 0.0}), {nonzero, nonzero},
                                     {zero, nonzero}));
}

TEST_CASE("irreducibility via the commutant dimension") {
  const CMat id = CMat::identity(2);
  const CMat sx(2, {0.0, 1.0, 1.0, 0.0});
  const CMat sz(2, {1.0, 0.0, 0.0, -1.0});

  const IrreducibilityReport full = irreducibility_test({id, sx, sz});
  CHECK(full.commutant_dim == 1);
  CHECK(full.is_irreducible);

  const IrreducibilityReport diag = irreducibility_test({id, sz});
  CHECK(diag.commutant_dim == 2);
  CHECK_FALSE(diag.is_irreducible);

  const IrreducibilityReport trivial = irreducibility_test({CMat::identity(3)});
  CHECK(trivial.commutant_dim == 9);
  CHECK_FALSE(trivial.is_irreducible);
}

TEST_CASE("z rotations leave exactly the sigma_z direction invariant") {
  const GammaSet g = dirac_gammas(1);
  const IrreducibilityReport r =
      invariant_index_sets({CMat::identity(2), zrotation(1.0), zrotation(2.5)}, g);
  REQUIRE(r.invariant_indices.size() == 1);
  CHECK(r.invariant_indices[0] == 2);
  CHECK(r.variant_indices == std::vector<int>{0, 1});
}

TEST_CASE("validate rejects malformed ensembles") {
  TwoSetEnsemble e;
  e.d = 2;
  e.eta = 0.5;
  e.eta_prime = 0.5;
  const GammaSet g = dirac_gammas(1);
  e.rho1 = bloch_to_state(bloch(1.0, {0.0, 0.0, 1.0}), g);
  e.rho1_prime = bloch_to_state(bloch(1.0, {0.0, 0.0, -1.0}), g);
  e.U = {zrotation(0.5)};  // first unitary must be the identity
  e.U_prime = {CMat::identity(2)};
  CHECK_THROWS(e.validate());
  e.U = {CMat::identity(2)};
  CHECK_NOTHROW(e.validate());
  e.rho1 = CMat::identity(2);  // trace 2, not a density matrix
  CHECK_THROWS(e.validate());
}
