#include "medkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "medkit/cmat.hpp"
#include "medkit/eig.hpp"

namespace medkit {

double residual_norm(const RMat& a, const std::vector<double>& x, const std::vector<double>& b) {
  double s = 0.0;
  for (int i = 0; i < a.rows; ++i) {
    double r = -b[i];
    for (int j = 0; j < a.cols; ++j) r += a(i, j) * x[j];
    s += r * r;
  }
  return std::sqrt(s);
}

std::vector<double> lstsq(const RMat& a, const std::vector<double>& b, double rel_cutoff) {
  if (static_cast<int>(b.size()) != a.rows) throw std::invalid_argument("lstsq: size mismatch");
  const int n = a.cols;
  if (n == 0) return {};
  // Normal equations, diagonalized with the Hermitian solver (real symmetric).
  CMat g(n);
  std::vector<double> atb(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < a.rows; ++k) s += a(k, i) * a(k, j);
      g(i, j) = s;
    }
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = 0; k < a.rows; ++k) s += a(k, i) * b[k];
    atb[i] = s;
  }
  const EigenPair ep = eig_herm(g);
  const double cut = rel_cutoff * std::max(ep.values.back(), 1e-300);
  std::vector<double> x(n, 0.0);
  for (int k = 0; k < n; ++k) {
    if (ep.values[k] <= cut) continue;
    double proj = 0.0;
    for (int i = 0; i < n; ++i) proj += ep.vectors(i, k).real() * atb[i];
    proj /= ep.values[k];
    for (int i = 0; i < n; ++i) x[i] += proj * ep.vectors(i, k).real();
  }
  return x;
}

std::vector<double> nnls(const RMat& a, const std::vector<double>& b, double* residual) {
  const int n = a.cols;
  std::vector<double> x(n, 0.0);
  std::vector<bool> passive(n, false);
  std::vector<double> w(n, 0.0);

  auto gradient = [&]() {
    // w = A^T (b - A x)
    std::vector<double> r(a.rows, 0.0);
    for (int i = 0; i < a.rows; ++i) {
      double s = b[i];
      for (int j = 0; j < n; ++j) s -= a(i, j) * x[j];
      r[i] = s;
    }
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = 0; i < a.rows; ++i) s += a(i, j) * r[i];
      w[j] = s;
    }
  };

  auto solve_passive = [&]() {
    std::vector<int> idx;
    for (int j = 0; j < n; ++j)
      if (passive[j]) idx.push_back(j);
    if (idx.empty()) return std::vector<double>{};
    RMat sub(a.rows, static_cast<int>(idx.size()));
    for (int i = 0; i < a.rows; ++i)
      for (size_t j = 0; j < idx.size(); ++j) sub(i, static_cast<int>(j)) = a(i, idx[j]);
    return lstsq(sub, b);
  };

  const int max_outer = 3 * n + 30;
  for (int outer = 0; outer < max_outer; ++outer) {
    gradient();
    int best = -1;
    double best_w = 1e-11;
    for (int j = 0; j < n; ++j)
      if (!passive[j] && w[j] > best_w) {
        best_w = w[j];
        best = j;
      }
    if (best < 0) break;
    passive[best] = true;

    for (int inner = 0; inner < max_outer; ++inner) {
      std::vector<double> z = solve_passive();
      std::vector<int> idx;
      for (int j = 0; j < n; ++j)
        if (passive[j]) idx.push_back(j);
      bool all_pos = true;
      for (double v : z)
        if (v <= 0.0) all_pos = false;
      if (all_pos) {
        for (int j = 0; j < n; ++j) x[j] = 0.0;
        for (size_t j = 0; j < idx.size(); ++j) x[idx[j]] = z[j];
        break;
      }
      // step toward z as far as nonnegativity allows, drop hit variables
      double alpha = 1.0;
      for (size_t j = 0; j < idx.size(); ++j) {
        if (z[j] <= 0.0) {
          const double xj = x[idx[j]];
          const double denom = xj - z[j];
          if (denom > 0.0) alpha = std::min(alpha, xj / denom);
        }
      }
      for (size_t j = 0; j < idx.size(); ++j) {
        x[idx[j]] += alpha * (z[j] - x[idx[j]]);
        if (x[idx[j]] <= 1e-14) {
          x[idx[j]] = 0.0;
          passive[idx[j]] = false;
        }
      }
    }
  }
  if (residual) *residual = residual_norm(a, x, b);
  return x;
}

}  // namespace medkit
