#include "medkit/blochdirac.hpp"

#include <cmath>

namespace medkit {

namespace {

CMat pauli_x() {
  CMat m(2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}
CMat pauli_y() {
  CMat m(2);
  m(0, 1) = cplx(0.0, -1.0);
  m(1, 0) = cplx(0.0, 1.0);
  return m;
}
CMat pauli_z() {
  CMat m(2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

}  // namespace

GammaSet dirac_gammas(int m) {
  if (m < 1) throw std::invalid_argument("dirac_gammas: m must be >= 1");
  if (m > 4) throw DimensionTooLarge("dirac_gammas: m > 4 (d > 16) not supported");
  GammaSet g;
  g.m = 1;
  g.gammas = {pauli_x(), pauli_y(), pauli_z()};
  while (g.m < m) {
    std::vector<CMat> next;
    next.reserve(g.gammas.size() + 2);
    for (const auto& gamma : g.gammas) next.push_back(gamma.kron(pauli_x()));
    next.push_back(CMat::identity(g.dim()).kron(pauli_y()));
    next.push_back(CMat::identity(g.dim()).kron(pauli_z()));
    g.gammas = std::move(next);
    ++g.m;
  }
  return g;
}

CMat dot_gamma(const std::vector<double>& n, const GammaSet& g) {
  if (n.size() != g.gammas.size())
    throw DimensionMismatch("dot_gamma: direction length != 2m+1");
  CMat out(g.dim());
  for (size_t i = 0; i < n.size(); ++i)
    if (n[i] != 0.0) out += n[i] * g.gammas[i];
  return out;
}

CMat bloch_to_state(const GeneralizedBlochState& s, const GammaSet& g) {
  if (s.m != g.m) throw DimensionMismatch("bloch_to_state: m mismatch");
  if (s.a < -1e-12 || s.a > 1.0 + 1e-12)
    throw std::invalid_argument("bloch_to_state: radius outside [0,1]");
  const int d = g.dim();
  CMat rho = CMat::identity(d);
  if (s.a != 0.0) rho += s.a * dot_gamma(s.n, g);
  rho *= cplx(1.0 / d, 0.0);
  return rho;
}

GeneralizedBlochState state_to_bloch(const CMat& rho, const GammaSet& g) {
  if (rho.dim() != g.dim()) throw DimensionMismatch("state_to_bloch: dim mismatch");
  const int k = static_cast<int>(g.gammas.size());
  GeneralizedBlochState s;
  s.m = g.m;
  s.n.assign(k, 0.0);
  double a2 = 0.0;
  for (int i = 0; i < k; ++i) {
    const double ani = trace_re(rho, g.gammas[i]);  // a * n_i
    s.n[i] = ani;
    a2 += ani * ani;
  }
  s.a = std::sqrt(a2);
  if (s.a > 1e-14) {
    for (auto& x : s.n) x /= s.a;
  } else {
    s.a = 0.0;
    s.n.assign(k, 0.0);
    s.n.back() = 1.0;  // direction is arbitrary at the center
  }
  const CMat rec = bloch_to_state(s, g);
  if ((rho - rec).fnorm() > 1e-8)
    throw OutsideFamily("state_to_bloch: state is not of generalized Bloch form");
  return s;
}

std::pair<CMat, CMat> spectral_split(const GeneralizedBlochState& s, const GammaSet& g) {
  if (s.a <= 0.0) throw ZeroRadius("spectral_split: direction undefined at a = 0");
  const int d = g.dim();
  const CMat ng = dot_gamma(s.n, g);
  const CMat half = cplx(0.5, 0.0) * CMat::identity(d);
  return {half + cplx(0.5, 0.0) * ng, half - cplx(0.5, 0.0) * ng};
}

}  // namespace medkit
