#ifndef MEDKIT_LINALG_HPP
#define MEDKIT_LINALG_HPP

#include <vector>

namespace medkit {

// Dense real matrix, row-major; only what the weight solver needs.
struct RMat {
  int rows = 0, cols = 0;
  std::vector<double> a;

  RMat() = default;
  RMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}
  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

// Minimum-norm least squares via spectral pseudo-inverse of A^T A.
std::vector<double> lstsq(const RMat& a, const std::vector<double>& b,
                          double rel_cutoff = 1e-12);

// Lawson-Hanson nonnegative least squares: min ||Ax - b|| s.t. x >= 0.
// On return *residual holds ||Ax - b||.
std::vector<double> nnls(const RMat& a, const std::vector<double>& b, double* residual);

double residual_norm(const RMat& a, const std::vector<double>& x, const std::vector<double>& b);

}  // namespace medkit

#endif
