#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "medkit/simulate.hpp"
#include "helpers.hpp"

using namespace medkit;
using medkit::testing::bloch;

namespace {

Povm projective_z() {
  CMat p0(2), p1(2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  Povm p = Povm::from_elements({p0, p1}, 1);
  p.factorize();
  return p;
}

}  // namespace

TEST_CASE("rng stream is pinned by test vectors") {
  Xoshiro256ss r(42);
  CHECK(r.next_u64() == 1546998764402558742ull);
  CHECK(r.next_u64() == 6990951692964543102ull);
  CHECK(r.next_u64() == 12544586762248559009ull);
  Xoshiro256ss r1(1);
  CHECK(r1.next_u64() == 12966619160104079557ull);
  CHECK(r1.next_u64() == 9600361134598540522ull);
  Xoshiro256ss rd(42);
  CHECK(rd.next_double() == doctest::Approx(0.083862971059882163).epsilon(1e-16));
}

TEST_CASE("a basis state always produces its own projector outcome") {
  const GammaSet g = dirac_gammas(1);
  const CMat rho = bloch_to_state(bloch(1.0, {0.0, 0.0, 1.0}), g);
  const Povm p = projective_z();
  Xoshiro256ss rng(5);
  for (int t = 0; t < 100; ++t) CHECK(sample_outcome(rho, p, rng) == 0);
}

TEST_CASE("the maximally mixed state splits a projective measurement evenly") {
  const CMat rho = cplx(0.5, 0.0) * CMat::identity(2);
  const Povm p = projective_z();
  Xoshiro256ss rng(9);
  int zeros = 0;
  const int trials = 100000;
  for (int t = 0; t < trials; ++t) zeros += sample_outcome(rho, p, rng) == 0 ? 1 : 0;
  // 4-sigma band around 1/2
  CHECK(std::abs(zeros / static_cast<double>(trials) - 0.5) < 4.0 * 0.5 / std::sqrt(trials));
}

TEST_CASE("guessing the dominant state estimates p = eta") {
  const auto e = build_qubit_zrotation_ensemble(0.7, 0.1, bloch(0.5, {0.0, 0.0, 1.0}),
                                                bloch(1.0, {1.0, 0.0, 0.0}), {0.0},
                                                {0.0, 2.0 * M_PI / 3.0, 4.0 * M_PI / 3.0});
  std::vector<CMat> els(e.total(), CMat::zero(2));
  els[0] = CMat::identity(2);
  Povm povm = Povm::from_elements(els, e.n());
  povm.factorize();
  const SimResult res = monte_carlo_success(e, povm, 200000, 11);
  CHECK(res.trials == 200000);
  CHECK(std::abs(res.p_hat - 0.7) <= 4.0 * res.stderr_hat);
  CHECK(res.stderr_hat ==
        doctest::Approx(std::sqrt(res.p_hat * (1.0 - res.p_hat) / res.trials)).epsilon(1e-12));
}

TEST_CASE("simulation streams are reproducible per seed") {
  const auto e = build_qubit_zrotation_ensemble(0.25, 0.25, bloch(1.0, {1.0, 0.0, 0.0}),
                                                bloch(1.0, {0.0, 1.0, 0.0}), {0.0, M_PI},
                                                {0.0, M_PI});
  std::vector<CMat> els(4, cplx(0.25, 0.0) * CMat::identity(2));
  Povm povm = Povm::from_elements(els, 2);
  povm.factorize();
  const SimResult a = monte_carlo_success(e, povm, 50000, 123);
  const SimResult b = monte_carlo_success(e, povm, 50000, 123);
  const SimResult c = monte_carlo_success(e, povm, 50000, 124);
  CHECK(a.successes == b.successes);
  CHECK(a.p_hat == b.p_hat);
  CHECK(a.successes != c.successes);  // distinct stream
}

TEST_CASE("malformed outcome distributions are rejected") {
  const GammaSet g = dirac_gammas(1);
  const CMat rho = bloch_to_state(bloch(1.0, {0.0, 0.0, 1.0}), g);
  Xoshiro256ss rng(1);

  // completeness violated: probabilities add to 2
  Povm doubled = Povm::from_elements({CMat::identity(2), CMat::identity(2)}, 1);
  CHECK_THROWS_AS(sample_outcome(rho, doubled, rng), InvalidDistribution);

  // negative probability from a non-PSD element
  CMat neg(2);
  neg(0, 0) = -0.5;
  neg(1, 1) = 0.5;
  Povm bad = Povm::from_elements({neg, CMat::identity(2) - neg}, 1);
  CHECK_THROWS_AS(sample_outcome(rho, bad, rng), InvalidDistribution);
}
