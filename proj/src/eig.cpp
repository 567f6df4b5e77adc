#include "medkit/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace medkit {

namespace {

void require_hermitian(const CMat& m, const char* where) {
  if (!m.is_finite()) throw NonHermitian(std::string(where) + ": non-finite entries");
  const double scale = std::max(m.fnorm(), 1.0);
  if (m.herm_residual() > kHermTol * scale)
    throw NonHermitian(std::string(where) + ": matrix is not Hermitian within tolerance");
}

double offdiag_norm(const CMat& a) {
  double s = 0.0;
  const int n = a.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

EigenPair eig_herm(const CMat& m) {
  require_hermitian(m, "eig_herm");
  const int n = m.dim();

  // Symmetrize to kill the allowed sub-tolerance skew, then run cyclic
  // complex Jacobi: each rotation zeroes one off-diagonal pair exactly.
  CMat a(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  CMat v = CMat::identity(n);

  const double scale = std::max(a.fnorm(), 1e-300);
  const double target = 1e-14 * scale;
  const int max_sweeps = 100;
  int sweep = 0;
  while (offdiag_norm(a) > target) {
    if (++sweep > max_sweeps) throw ConvergenceFailure("eig_herm: Jacobi sweeps stalled");
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= 1e-300) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const cplx phase = apq / mag;  // a_pq = mag * phase
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        double t;
        if (tau >= 0.0)
          t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
        else
          t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // J_pq = s*phase, J_qp = -s*conj(phase), diag c; A <- J^dag A J, V <- V J
        const cplx jpq = s * phase;
        const cplx jqp = -s * std::conj(phase);
        for (int i = 0; i < n; ++i) {
          const cplx aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip + jqp * aiq;
          a(i, q) = jpq * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          const cplx api = a(p, i), aqi = a(q, i);
          a(p, i) = c * api + std::conj(jqp) * aqi;
          a(q, i) = std::conj(jpq) * api + c * aqi;
        }
        for (int i = 0; i < n; ++i) {
          const cplx vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip + jqp * viq;
          v(i, q) = jpq * vip + c * viq;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = cplx(a(p, p).real(), 0.0);
        a(q, q) = cplx(a(q, q).real(), 0.0);
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

  EigenPair ep;
  ep.values.resize(n);
  ep.vectors = CMat(n);
  for (int k = 0; k < n; ++k) {
    ep.values[k] = a(order[k], order[k]).real();
    for (int i = 0; i < n; ++i) ep.vectors(i, k) = v(i, order[k]);
  }
  return ep;
}

bool psd_check(const CMat& m, double tol) { return min_eig_herm(m) >= -tol; }

double min_eig_herm(const CMat& m) { return eig_herm(m).values.front(); }
double max_eig_herm(const CMat& m) { return eig_herm(m).values.back(); }

CMat herm_func(const CMat& m, const std::function<double(double)>& f) {
  const EigenPair ep = eig_herm(m);
  const int n = m.dim();
  CMat out(n);
  for (int k = 0; k < n; ++k) {
    const double fk = f(ep.values[k]);
    if (fk == 0.0) continue;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out(i, j) += fk * ep.vectors(i, k) * std::conj(ep.vectors(j, k));
  }
  return out;
}

CMat expi_herm(const CMat& h) {
  require_hermitian(h, "expi_herm");
  const EigenPair ep = eig_herm(h);
  const int n = h.dim();
  CMat out(n);
  for (int k = 0; k < n; ++k) {
    const cplx fk = std::exp(cplx(0.0, ep.values[k]));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out(i, j) += fk * ep.vectors(i, k) * std::conj(ep.vectors(j, k));
  }
  return out;
}

CMat pinv_sqrt(const CMat& m, double cutoff) {
  const EigenPair ep = eig_herm(m);
  const double emax = std::max(ep.values.back(), 0.0);
  const double cut = cutoff * std::max(emax, 1e-300);
  const int n = m.dim();
  CMat out(n);
  for (int k = 0; k < n; ++k) {
    if (ep.values[k] <= cut) continue;
    const double fk = 1.0 / std::sqrt(ep.values[k]);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out(i, j) += fk * ep.vectors(i, k) * std::conj(ep.vectors(j, k));
  }
  return out;
}

CMat reconstruct(const EigenPair& ep) {
  const int n = ep.vectors.dim();
  CMat out(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out(i, j) += ep.values[k] * ep.vectors(i, k) * std::conj(ep.vectors(j, k));
  return out;
}

}  // namespace medkit
