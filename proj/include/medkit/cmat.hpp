#ifndef MEDKIT_CMAT_HPP
#define MEDKIT_CMAT_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace medkit {

using cplx = std::complex<double>;

struct DimensionMismatch : std::runtime_error {
  explicit DimensionMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

// Small dense complex matrix, row-major. All operators in this project are
// tiny (d <= 16), so everything is by value and unoptimized.
class CMat {
 public:
  CMat() : dim_(0) {}
  explicit CMat(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim, cplx(0.0, 0.0)) {
    if (dim < 1) throw std::invalid_argument("CMat: dim must be >= 1");
  }
  CMat(int dim, std::vector<cplx> entries) : dim_(dim), a_(std::move(entries)) {
    if (dim < 1) throw std::invalid_argument("CMat: dim must be >= 1");
    if (a_.size() != static_cast<size_t>(dim) * dim)
      throw std::invalid_argument("CMat: entry count does not match dim");
  }

  static CMat identity(int dim) {
    CMat m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }
  static CMat zero(int dim) { return CMat(dim); }

  int dim() const { return dim_; }
  cplx& operator()(int i, int j) { return a_[static_cast<size_t>(i) * dim_ + j]; }
  const cplx& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }
  const std::vector<cplx>& data() const { return a_; }

  CMat& operator+=(const CMat& o) {
    check_same(o);
    for (size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  CMat& operator-=(const CMat& o) {
    check_same(o);
    for (size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  CMat& operator*=(cplx s) {
    for (auto& x : a_) x *= s;
    return *this;
  }

  friend CMat operator+(CMat a, const CMat& b) { return a += b; }
  friend CMat operator-(CMat a, const CMat& b) { return a -= b; }
  friend CMat operator*(cplx s, CMat a) { return a *= s; }
  friend CMat operator*(CMat a, cplx s) { return a *= s; }

  friend CMat operator*(const CMat& a, const CMat& b) {
    a.check_same(b);
    const int n = a.dim_;
    CMat c(n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx(0.0, 0.0)) continue;
        for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  CMat adjoint() const {
    CMat c(dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) c(j, i) = std::conj((*this)(i, j));
    return c;
  }

  cplx trace() const {
    cplx t = 0.0;
    for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  double fnorm() const {
    double s = 0.0;
    for (const auto& x : a_) s += std::norm(x);
    return std::sqrt(s);
  }

  // ||M - M^dag|| (absolute)
  double herm_residual() const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) s += std::norm((*this)(i, j) - std::conj((*this)(j, i)));
    return std::sqrt(s);
  }

  bool is_finite() const {
    for (const auto& x : a_)
      if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
    return true;
  }

  CMat kron(const CMat& b) const {
    const int n = dim_, m = b.dim_;
    CMat c(n * m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < m; ++k)
          for (int l = 0; l < m; ++l) c(i * m + k, j * m + l) = (*this)(i, j) * b(k, l);
    return c;
  }

 private:
  void check_same(const CMat& o) const {
    if (dim_ != o.dim_) throw DimensionMismatch("CMat: dimension mismatch");
  }
  int dim_;
  std::vector<cplx> a_;
};

inline CMat conj_by(const CMat& u, const CMat& x) { return u * x * u.adjoint(); }

inline double trace_re(const CMat& a, const CMat& b) {
  // Re Tr(a b) without forming the product
  const int n = a.dim();
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) s += (a(i, k) * b(k, i)).real();
  return s;
}

}  // namespace medkit

#endif
