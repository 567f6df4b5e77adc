#ifndef MEDKIT_EIG_HPP
#define MEDKIT_EIG_HPP

#include <functional>

#include "medkit/cmat.hpp"

namespace medkit {

struct NonHermitian : std::runtime_error {
  explicit NonHermitian(const std::string& msg) : std::runtime_error(msg) {}
};
struct ConvergenceFailure : std::runtime_error {
  explicit ConvergenceFailure(const std::string& msg) : std::runtime_error(msg) {}
};

struct EigenPair {
  std::vector<double> values;  // ascending
  CMat vectors;                // orthonormal columns, M = V diag(values) V^dag
};

inline constexpr double kHermTol = 1e-10;  // relative Hermiticity tolerance

// Spectral decomposition of a Hermitian matrix by cyclic complex Jacobi
// rotations. Eigenvalues ascending, eigenvectors as orthonormal columns.
EigenPair eig_herm(const CMat& m);

// true iff min eigenvalue >= -tol
bool psd_check(const CMat& m, double tol);

double min_eig_herm(const CMat& m);
double max_eig_herm(const CMat& m);

// U = exp(iH) for Hermitian H, via eigendecomposition (exact at these sizes).
CMat expi_herm(const CMat& h);

// f applied to the spectrum: V f(Lambda) V^dag
CMat herm_func(const CMat& m, const std::function<double(double)>& f);

// Pseudo-inverse square root on the support; eigenvalues below
// cutoff * max(eig) are treated as zero.
CMat pinv_sqrt(const CMat& m, double cutoff = 1e-12);

CMat reconstruct(const EigenPair& ep);

}  // namespace medkit

#endif
