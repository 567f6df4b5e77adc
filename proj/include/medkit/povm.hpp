#ifndef MEDKIT_POVM_HPP
#define MEDKIT_POVM_HPP

#include <optional>

#include "medkit/cmat.hpp"

namespace medkit {

// Measurement: n + n' PSD elements resolving the identity. The optional
// weight/shape factorization Pi_k = weight_k * shape_k keeps shapes
// trace-normalized to d, so populated weights sum to 1.
struct Povm {
  std::vector<CMat> elements;            // unprimed first, then primed
  std::vector<double> weights;           // empty when not factorized
  std::vector<CMat> shapes;              // empty when not factorized
  int n_first = 0;                       // how many elements belong to the first set

  int dim() const { return elements.empty() ? 0 : elements.front().dim(); }

  double completeness_residual() const {
    if (elements.empty()) return 0.0;
    CMat s(dim());
    for (const auto& p : elements) s += p;
    return (s - CMat::identity(dim())).fnorm();
  }

  static Povm from_elements(std::vector<CMat> els, int n_first) {
    Povm p;
    p.elements = std::move(els);
    p.n_first = n_first;
    return p;
  }

  // Derive the weight/shape split from the elements (weight = Tr/d).
  void factorize() {
    weights.clear();
    shapes.clear();
    const int d = dim();
    for (const auto& el : elements) {
      const double w = el.trace().real() / d;
      weights.push_back(w);
      if (w > 1e-14)
        shapes.push_back(cplx(1.0 / w, 0.0) * el);
      else
        shapes.push_back(CMat::zero(d));
    }
  }
};

}  // namespace medkit

#endif
