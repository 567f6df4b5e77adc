#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "medkit/eig.hpp"
#include "helpers.hpp"

using namespace medkit;
using medkit::testing::random_hermitian;

namespace {

const CMat kSigmaX(2, {0.0, 1.0, 1.0, 0.0});
const CMat kSigmaY(2, {0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0});

}  // namespace

TEST_CASE("diagonal matrix eigenvalues come back sorted") {
  CMat m(2);
  m(0, 0) = 2.0;
  m(1, 1) = 1.0;
  const EigenPair ep = eig_herm(m);
  CHECK(ep.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ep.values[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("sigma_x spectrum is {-1, +1} with Hadamard-type eigenvectors") {
  const EigenPair ep = eig_herm(kSigmaX);
  CHECK(ep.values[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(ep.values[1] == doctest::Approx(1.0).epsilon(1e-12));
  // columns are orthonormal and diagonalize sigma_x
  CHECK((ep.vectors.adjoint() * ep.vectors - CMat::identity(2)).fnorm() < 1e-12);
  CHECK((reconstruct(ep) - kSigmaX).fnorm() < 1e-12);
}

TEST_CASE("random 4x4 Hermitian matrices reconstruct to 1e-10") {
  Xoshiro256ss rng(42);
  for (int t = 0; t < 20; ++t) {
    const CMat h = random_hermitian(4, rng);
    const EigenPair ep = eig_herm(h);
    CHECK((reconstruct(ep) - h).fnorm() < 1e-10);
    CHECK((ep.vectors.adjoint() * ep.vectors - CMat::identity(4)).fnorm() < 1e-10);
    for (size_t i = 1; i < ep.values.size(); ++i) CHECK(ep.values[i - 1] <= ep.values[i]);
  }
}

TEST_CASE("psd_check accepts PSD and flags indefinite matrices") {
  CMat pos(2);
  pos(0, 0) = 0.5;
  pos(1, 1) = 0.25;
  CHECK(psd_check(pos, 1e-12));
  CHECK(psd_check(CMat::zero(3), 1e-12));
  CHECK_FALSE(psd_check(kSigmaX, 1e-9));  // eigenvalue -1
  CMat tiny_neg(2);
  tiny_neg(0, 0) = -1e-13;
  tiny_neg(1, 1) = 1.0;
  CHECK(psd_check(tiny_neg, 1e-12));
}

TEST_CASE("min and max eigenvalue helpers") {
  Xoshiro256ss rng(7);
  const CMat h = random_hermitian(3, rng);
  const EigenPair ep = eig_herm(h);
  CHECK(min_eig_herm(h) == doctest::Approx(ep.values.front()).epsilon(1e-12));
  CHECK(max_eig_herm(h) == doctest::Approx(ep.values.back()).epsilon(1e-12));
}

TEST_CASE("expi_herm of the zero matrix is the identity") {
  CHECK((expi_herm(CMat::zero(3)) - CMat::identity(3)).fnorm() < 1e-14);
}

TEST_CASE("expi_herm of (pi/2) sigma_y is i sigma_y") {
  const CMat u = expi_herm(cplx(M_PI / 2.0, 0.0) * kSigmaY);
  CHECK((u - cplx(0.0, 1.0) * kSigmaY).fnorm() < 1e-12);
}

TEST_CASE("expi_herm inverse pairs multiply to the identity") {
  Xoshiro256ss rng(11);
  for (int t = 0; t < 10; ++t) {
    const CMat h = random_hermitian(4, rng);
    const CMat u = expi_herm(h);
    const CMat v = expi_herm(cplx(-1.0, 0.0) * h);
    CHECK((u * v - CMat::identity(4)).fnorm() < 1e-11);
    CHECK((u.adjoint() * u - CMat::identity(4)).fnorm() < 1e-11);
  }
}

TEST_CASE("herm_func applies a scalar function to the spectrum") {
  Xoshiro256ss rng(13);
  const CMat h = random_hermitian(3, rng);
  const CMat sq = herm_func(h, [](double x) { return x * x; });
  CHECK((sq - h * h).fnorm() < 1e-10);
}

TEST_CASE("pinv_sqrt inverts the square root on the support") {
  CMat m(3);
  m(0, 0) = 4.0;
  m(1, 1) = 9.0;  // m(2,2) stays zero
  const CMat r = pinv_sqrt(m);
  CHECK(r(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r(1, 1).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(std::abs(r(2, 2)) < 1e-12);
}

TEST_CASE("eig_herm rejects non-Hermitian input") {
  CMat m(2);
  m(0, 1) = 1.0;  // strictly upper triangular
  CHECK_THROWS_AS(eig_herm(m), NonHermitian);
}
