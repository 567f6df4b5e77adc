#ifndef MEDKIT_TESTS_HELPERS_HPP
#define MEDKIT_TESTS_HELPERS_HPP

#include <cmath>
#include <vector>

#include "medkit/blochdirac.hpp"
#include "medkit/cmat.hpp"
#include "medkit/rng.hpp"

namespace medkit::testing {

inline GeneralizedBlochState bloch(double a, std::vector<double> n) {
  GeneralizedBlochState s;
  s.m = static_cast<int>((n.size() - 1) / 2);
  s.a = a;
  double norm = 0.0;
  for (double x : n) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : n) x /= norm;
  s.n = std::move(n);
  return s;
}

inline CMat random_hermitian(int d, Xoshiro256ss& rng) {
  CMat h(d);
  for (int i = 0; i < d; ++i) {
    h(i, i) = rng.normal();
    for (int j = i + 1; j < d; ++j) {
      h(i, j) = cplx(rng.normal(), rng.normal());
      h(j, i) = std::conj(h(i, j));
    }
  }
  return h;
}

inline CMat random_density(int d, Xoshiro256ss& rng) {
  CMat a(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = cplx(rng.normal(), rng.normal());
  CMat rho = a.adjoint() * a;
  return rho * cplx(1.0 / rho.trace().real(), 0.0);
}

inline std::vector<double> random_unit(int len, Xoshiro256ss& rng) {
  std::vector<double> n(len);
  double norm = 0.0;
  for (double& x : n) {
    x = rng.normal();
    norm += x * x;
  }
  norm = std::sqrt(norm);
  for (double& x : n) x /= norm;
  return n;
}

}  // namespace medkit::testing

#endif
