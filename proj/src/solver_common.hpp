#ifndef MEDKIT_SOLVER_COMMON_HPP
#define MEDKIT_SOLVER_COMMON_HPP

// Internal helpers shared by the closed-form solver translation units.

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "medkit/closedform.hpp"

namespace medkit::detail {

inline Povm povm_from_shapes(const std::vector<CMat>& shapes, const std::vector<double>& weights,
                             int dim, int n_first) {
  (void)dim;
  Povm p;
  p.n_first = n_first;
  p.shapes = shapes;
  p.weights = weights;
  for (size_t k = 0; k < shapes.size(); ++k) {
    CMat el = shapes[k];
    el *= cplx(weights[k], 0.0);
    p.elements.push_back(el);
  }
  return p;
}

struct Candidate {
  double p = 0.0;
  Branch branch = Branch::Fallback;
  std::string detail;
  Povm povm;
  std::optional<QuadraticInfo> quadratic;
  bool built = false;       // POVM construction succeeded
  std::string fail_reason;  // when not built
};

// Certify every candidate and return the best certified one; throws
// NoBranchCertifies with a per-candidate dump when none survives.
inline SolveReport pick_certified(const TwoSetEnsemble& e, std::vector<Candidate>& cands,
                                  const char* who) {
  // order by success probability; on ties prefer the candidate keeping the
  // most states in play, so excluded-set variants only win when they must
  const auto active_count = [](const Candidate& c) {
    int n = 0;
    for (double w : c.povm.weights)
      if (w > 1e-12) ++n;
    return n;
  };
  std::sort(cands.begin(), cands.end(), [&](const Candidate& a, const Candidate& b) {
    if (std::abs(a.p - b.p) > 1e-9) return a.p > b.p;
    return active_count(a) > active_count(b);
  });
  SolveReport best;
  bool have = false;
  std::ostringstream dump;
  for (auto& c : cands) {
    if (!c.built) {
      dump << branch_name(c.branch) << " p=" << c.p << " not built: " << c.fail_reason << "\n";
      continue;
    }
    OptimalityCertificate cert = certificate(e, c.povm, c.p);
    dump << branch_name(c.branch) << " " << c.detail << " p=" << c.p
         << " worst_residual=" << cert.worst_margin()
         << (cert.certified() ? " CERTIFIED" : " rejected") << "\n";
    if (!cert.certified()) continue;
    if (!have) {
      best.p_opt = c.p;
      best.branch = c.branch;
      best.branch_detail = c.detail;
      best.povm = c.povm;
      best.certificate = std::move(cert);
      best.quadratic = c.quadratic;
      have = true;
    } else if (std::abs(c.p - best.p_opt) <= 1e-9 && c.branch != best.branch) {
      best.branch_detail += " | also certified: " + branch_name(c.branch) + " " + c.detail;
    }
  }
  if (!have)
    throw NoBranchCertifies(std::string(who) + ": no candidate branch certifies\n" + dump.str());
  return best;
}

// pi_j = I - m^(j).gamma, trace-d shapes from measurement direction vectors
inline std::vector<CMat> gamma_shapes(const std::vector<std::vector<double>>& mvecs,
                                      const GammaSet& g) {
  std::vector<CMat> shapes;
  for (const auto& m : mvecs) {
    CMat s = CMat::identity(g.dim());
    s -= dot_gamma(m, g);
    shapes.push_back(s);
  }
  return shapes;
}

inline double vnorm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace medkit::detail

#endif
