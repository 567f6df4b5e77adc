#include "medkit/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "medkit/eig.hpp"
#include "solver_common.hpp"

namespace medkit {

using detail::Candidate;
using detail::gamma_shapes;
using detail::pick_certified;
using detail::povm_from_shapes;
using detail::vnorm;

std::string branch_name(Branch b) {
  switch (b) {
    case Branch::Irreducible: return "Irreducible";
    case Branch::QubitCase1: return "QubitCase1";
    case Branch::QubitCase2: return "QubitCase2";
    case Branch::QubitCase3: return "QubitCase3";
    case Branch::QubitCase4: return "QubitCase4";
    case Branch::Special1: return "Special1";
    case Branch::Special2: return "Special2";
    case Branch::Special3: return "Special3";
    case Branch::MQubitIrred: return "MQubitIrred";
    case Branch::MQubitRed: return "MQubitRed";
    case Branch::DegenerateIdentity: return "Degenerate-Pi=I";
    case Branch::Fallback: return "Fallback";
  }
  return "?";
}

WeightConstraintSystem completeness_system(const std::vector<CMat>& shapes, int dim,
                                           std::vector<bool> forced_zero) {
  WeightConstraintSystem sys;
  const int k = static_cast<int>(shapes.size());
  if (forced_zero.empty()) forced_zero.assign(k, false);
  sys.forced_zero = std::move(forced_zero);
  sys.A = RMat(2 * dim * dim, k);
  sys.b.assign(2 * dim * dim, 0.0);
  for (int c = 0; c < k; ++c) {
    if (shapes[c].dim() != dim) throw DimensionMismatch("completeness_system: shape dim");
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        sys.A(2 * (i * dim + j), c) = shapes[c](i, j).real();
        sys.A(2 * (i * dim + j) + 1, c) = shapes[c](i, j).imag();
      }
  }
  for (int i = 0; i < dim; ++i) sys.b[2 * (i * dim + i)] = 1.0;
  return sys;
}

std::vector<double> recover_weights(const WeightConstraintSystem& sys) {
  const int k = sys.A.cols;
  std::vector<int> active;
  for (int j = 0; j < k; ++j)
    if (j >= static_cast<int>(sys.forced_zero.size()) || !sys.forced_zero[j]) active.push_back(j);
  if (active.empty()) throw Infeasible("recover_weights: all weights forced to zero");

  RMat a(sys.A.rows, static_cast<int>(active.size()));
  for (int i = 0; i < a.rows; ++i)
    for (size_t j = 0; j < active.size(); ++j) a(i, static_cast<int>(j)) = sys.A(i, active[j]);

  auto feasible_at = [&](double t, std::vector<double>* sol) {
    // substitute x = y + t, y >= 0
    std::vector<double> rhs = sys.b;
    for (int i = 0; i < a.rows; ++i) {
      double shift = 0.0;
      for (int j = 0; j < a.cols; ++j) shift += a(i, j);
      rhs[i] -= t * shift;
    }
    double res = 0.0;
    std::vector<double> y = nnls(a, rhs, &res);
    if (res > sys.tol) return false;
    if (sol) {
      sol->assign(y.begin(), y.end());
      for (auto& v : *sol) v += t;
    }
    return true;
  };

  std::vector<double> best;
  if (!feasible_at(0.0, &best))
    throw Infeasible("recover_weights: no nonnegative solution satisfies the equalities");

  // push the minimum weight up as far as the polytope allows
  double lo = 0.0, hi = 1.0 / static_cast<double>(active.size());
  if (feasible_at(hi, &best)) {
    lo = hi;
  } else {
    for (int it = 0; it < 40 && hi - lo > 1e-12; ++it) {
      const double mid = 0.5 * (lo + hi);
      std::vector<double> sol;
      if (feasible_at(mid, &sol)) {
        lo = mid;
        best = std::move(sol);
      } else {
        hi = mid;
      }
    }
  }

  // The bisection accepts solutions with residual up to tol; re-solve the
  // equality system on the positive support to pull the residual back down
  // to machine precision.
  std::vector<int> support;
  for (size_t j = 0; j < active.size(); ++j)
    if (best[j] > 1e-12) support.push_back(static_cast<int>(j));
  if (!support.empty()) {
    RMat as(a.rows, static_cast<int>(support.size()));
    for (int i = 0; i < a.rows; ++i)
      for (size_t j = 0; j < support.size(); ++j)
        as(i, static_cast<int>(j)) = a(i, support[j]);
    const std::vector<double> xs = lstsq(as, sys.b);
    bool ok = residual_norm(as, xs, sys.b) <= 1e-11;
    for (double x : xs)
      if (x < -1e-10) ok = false;
    if (ok) {
      std::fill(best.begin(), best.end(), 0.0);
      for (size_t j = 0; j < support.size(); ++j) best[support[j]] = std::max(0.0, xs[j]);
    }
  }

  std::vector<double> w(k, 0.0);
  for (size_t j = 0; j < active.size(); ++j) w[active[j]] = std::max(0.0, best[j]);
  return w;
}

SolveReport solve_irreducible(const TwoSetEnsemble& e) {
  e.validate();
  if (e.n() < 2 || e.n_prime() < 2)
    throw NotIrreducible("solve_irreducible: irreducible case needs n >= 2 and n' >= 2");
  if (!irreducibility_test(e.U).is_irreducible ||
      !irreducibility_test(e.U_prime).is_irreducible)
    throw NotIrreducible("solve_irreducible: a generating set is reducible");

  const EigenPair spec1 = eig_herm(e.rho1);
  const EigenPair spec2 = eig_herm(e.rho1_prime);
  const double amax = spec1.values.back();
  const double amax_p = spec2.values.back();
  const double p1 = e.eta * amax * e.d;
  const double p2 = e.eta_prime * amax_p * e.d;
  const double p = std::max(p1, p2);
  const bool first_wins = p1 >= p2 - 1e-12;
  const bool second_wins = p2 >= p1 - 1e-12;

  // shape basis: conjugated projectors onto the max-eigenvalue eigenspace
  // of the winning seed(s); weights from the completeness relation
  auto eigprojectors = [&](const EigenPair& sp) {
    std::vector<CMat> projs;
    for (int k = 0; k < e.d; ++k) {
      if (sp.values[k] < sp.values.back() - 1e-10) continue;
      CMat pr(e.d);
      for (int i = 0; i < e.d; ++i)
        for (int j = 0; j < e.d; ++j) pr(i, j) = sp.vectors(i, k) * std::conj(sp.vectors(j, k));
      projs.push_back(cplx(static_cast<double>(e.d), 0.0) * pr);  // trace d
    }
    return projs;
  };

  std::vector<CMat> shapes;
  std::vector<int> owner;  // flat state index owning each shape column
  if (first_wins) {
    const auto projs = eigprojectors(spec1);
    for (int j = 0; j < e.n(); ++j)
      for (const auto& pr : projs) {
        shapes.push_back(conj_by(e.U[j], pr));
        owner.push_back(j);
      }
  }
  if (second_wins) {
    const auto projs = eigprojectors(spec2);
    for (int j = 0; j < e.n_prime(); ++j)
      for (const auto& pr : projs) {
        shapes.push_back(conj_by(e.U_prime[j], pr));
        owner.push_back(e.n() + j);
      }
  }

  std::vector<double> w;
  try {
    w = recover_weights(completeness_system(shapes, e.d));
  } catch (const Infeasible& ex) {
    throw WeightInfeasible(std::string("solve_irreducible: ") + ex.what());
  }

  // collapse shape columns into per-state POVM elements
  Povm povm;
  povm.n_first = e.n();
  povm.elements.assign(e.total(), CMat::zero(e.d));
  for (size_t k = 0; k < shapes.size(); ++k) {
    CMat el = shapes[k];
    el *= cplx(w[k], 0.0);
    povm.elements[owner[k]] += el;
  }
  povm.factorize();

  SolveReport rep;
  rep.p_opt = p;
  rep.branch = Branch::Irreducible;
  rep.branch_detail = first_wins && second_wins ? "tie: both sets active"
                      : first_wins              ? "first set wins"
                                                : "second set wins";
  rep.povm = povm;
  rep.certificate = certificate(e, povm, p);
  if (!rep.certificate.certified())
    throw NoBranchCertifies("solve_irreducible: constructed solution failed certification\n" +
                            certificate_report(rep.certificate));
  return rep;
}

SolveReport solve_mqubit_irreducible(const TwoSetEnsemble& e, const GammaSet& g) {
  e.validate();
  if (e.d != g.dim()) throw DimensionMismatch("solve_mqubit_irreducible: gamma dim");
  if (!irreducibility_test(e.U).is_irreducible ||
      !irreducibility_test(e.U_prime).is_irreducible)
    throw NotIrreducible("solve_mqubit_irreducible: a generating set is reducible");

  const GeneralizedBlochState seed = state_to_bloch(e.rho1, g);
  const GeneralizedBlochState seed_p = state_to_bloch(e.rho1_prime, g);
  const double p1 = e.eta * (1.0 + seed.a);
  const double p2 = e.eta_prime * (1.0 + seed_p.a);
  const double p = std::max(p1, p2);
  const bool first_wins = p1 >= p2 - 1e-12;
  const bool second_wins = p2 >= p1 - 1e-12;

  const auto [first, second] = make_states(e);
  std::vector<CMat> shapes;
  std::vector<int> owner;
  if (first_wins && seed.a > 0.0)
    for (int j = 0; j < e.n(); ++j) {
      // p - eta = eta b, so m^(j) = -n^(j) and pi_j = I + n^(j).gamma
      const GeneralizedBlochState s = state_to_bloch(first[j], g);
      CMat sh = CMat::identity(e.d);
      sh += dot_gamma(s.n, g);
      shapes.push_back(sh);
      owner.push_back(j);
    }
  if (second_wins && seed_p.a > 0.0)
    for (int j = 0; j < e.n_prime(); ++j) {
      const GeneralizedBlochState s = state_to_bloch(second[j], g);
      CMat sh = CMat::identity(e.d);
      sh += dot_gamma(s.n, g);
      shapes.push_back(sh);
      owner.push_back(e.n() + j);
    }
  if (shapes.empty()) {
    // both seeds maximally mixed: guessing the likelier set is optimal
    shapes.push_back(CMat::identity(e.d));
    owner.push_back(e.eta >= e.eta_prime ? 0 : e.n());
  }

  std::vector<double> w;
  try {
    w = recover_weights(completeness_system(shapes, e.d));
  } catch (const Infeasible& ex) {
    throw WeightInfeasible(std::string("solve_mqubit_irreducible: ") + ex.what());
  }

  Povm povm;
  povm.n_first = e.n();
  povm.elements.assign(e.total(), CMat::zero(e.d));
  for (size_t k = 0; k < shapes.size(); ++k) {
    CMat el = shapes[k];
    el *= cplx(w[k], 0.0);
    povm.elements[owner[k]] += el;
  }
  povm.factorize();

  SolveReport rep;
  rep.p_opt = p;
  rep.branch = Branch::MQubitIrred;
  rep.branch_detail = first_wins && second_wins ? "tie: both sets active"
                      : first_wins              ? "first set wins"
                                                : "second set wins";
  rep.povm = povm;
  rep.certificate = certificate(e, povm, p);
  if (!rep.certificate.certified())
    throw NoBranchCertifies("solve_mqubit_irreducible: solution failed certification\n" +
                            certificate_report(rep.certificate));
  return rep;
}

QuadraticInfo reducible_quadratic(double eta, double eta_prime, double b, double b_prime,
                                  double n0, double np0, double np1) {
  QuadraticInfo q;
  const double delta = eta - eta_prime;
  const double T = eta * b * n0;            // eta b n0
  const double Tp = eta_prime * b_prime * np0;
  const double G = T - Tp;                  // eta b n0 - eta' b' n'_0
  const double P2 = eta_prime * eta_prime * b_prime * b_prime * np1 * np1;
  const double D2 = G * G + P2;
  const double L = eta * eta * (1.0 - b * b) - eta_prime * eta_prime * (1.0 - b_prime * b_prime);
  const double E = L + T * T - Tp * Tp - P2;

  // Derived by eliminating the frame unknowns from the stationarity system:
  //   sqrt((p-eta)^2 - eta^2 b^2 (1-n0^2))
  // + sqrt((p-eta')^2 - eta'^2 b'^2 (1-n'_0^2-n'_1^2)) = sqrt(D2)
  // squared twice. Reduces to the qubit coefficients at n'_1 = 0.
  q.A = delta * delta - D2;
  q.B = -delta * (D2 + E) + 2.0 * eta * D2;
  q.C = (D2 + E) * (D2 + E) -
        4.0 * D2 * eta * eta * (1.0 - b * b * (1.0 - n0 * n0));

  // Printed-text coefficients, kept verbatim for the audit. Their n'_1^2
  // cross terms carry a factor 1/G, so they are undefined at G = 0; the
  // recurring combination (eta b n0)(eta'^2 b'^2 n'_1^2) is written T * P2.
  (void)Tp;
  q.A_printed = q.A;
  if (std::abs(G) > 1e-300) {
    const double GpPG = G + P2 / G;  // G + P2/G
    q.B_printed = (L - 2.0 * T * P2 / G) * delta - 2.0 * T * delta * GpPG + 2.0 * eta * D2;
    const double inner = L - T * P2 / G;
    const double bracket = b * b * (1.0 + P2 * n0 * n0 / (G * G)) - 1.0;
    q.C_printed = inner * inner + 4.0 * eta * eta * bracket * D2 -
                  4.0 * T * (L - 2.0 * T * P2 / G) * GpPG;
  } else {
    q.B_printed = std::nan("");
    q.C_printed = std::nan("");
  }

  auto larger_root = [](double A, double B, double C) {
    // A p^2 + B p + C/4 = 0, roots (-B +- sqrt(B^2 - A C)) / (2A)
    double disc = B * B - A * C;
    if (disc < 0.0 && disc > -1e-12) disc = 0.0;
    if (disc < 0.0) return std::nan("");
    if (std::abs(A) < 1e-12 * std::max(std::abs(B), std::abs(C)))
      return std::abs(B) > 0.0 ? -C / (4.0 * B) : std::nan("");
    const double r1 = (-B + std::sqrt(disc)) / (2.0 * A);
    const double r2 = (-B - std::sqrt(disc)) / (2.0 * A);
    return std::max(r1, r2);
  };
  auto smaller_root = [](double A, double B, double C) {
    double disc = B * B - A * C;
    if (disc < 0.0 && disc > -1e-12) disc = 0.0;
    if (disc < 0.0) return std::nan("");
    if (std::abs(A) < 1e-12 * std::max(std::abs(B), std::abs(C)))
      return std::abs(B) > 0.0 ? -C / (4.0 * B) : std::nan("");
    const double r1 = (-B + std::sqrt(disc)) / (2.0 * A);
    const double r2 = (-B - std::sqrt(disc)) / (2.0 * A);
    return std::min(r1, r2);
  };
  q.root = larger_root(q.A, q.B, q.C);
  q.other_root = smaller_root(q.A, q.B, q.C);
  q.root_printed = larger_root(q.A_printed, q.B_printed, q.C_printed);
  q.discrepancy = (std::isnan(q.root) || std::isnan(q.root_printed))
                      ? std::nan("")
                      : std::abs(q.root - q.root_printed);
  return q;
}

namespace {

// restriction of a direction vector to an index subset
std::vector<double> restrict_to(const std::vector<double>& v, const std::vector<int>& idx) {
  std::vector<double> out;
  for (int i : idx) out.push_back(v[i]);
  return out;
}

}  // namespace

SolveReport solve_mqubit_reducible(const TwoSetEnsemble& e, const GammaSet& g) {
  e.validate();
  if (e.d != g.dim()) throw DimensionMismatch("solve_mqubit_reducible: gamma dim");
  const int k = static_cast<int>(g.gammas.size());

  const GeneralizedBlochState seed = state_to_bloch(e.rho1, g);
  const GeneralizedBlochState seed_p = state_to_bloch(e.rho1_prime, g);
  const double b = seed.a, bp = seed_p.a;
  const IrreducibilityReport rep1 = invariant_index_sets(e.U, g);
  const IrreducibilityReport rep2 = invariant_index_sets(e.U_prime, g);

  std::vector<int> shared;  // S_I intersect S'_I
  for (int i : rep1.invariant_indices)
    if (std::find(rep2.invariant_indices.begin(), rep2.invariant_indices.end(), i) !=
        rep2.invariant_indices.end())
      shared.push_back(i);
  std::vector<bool> is_shared(k, false);
  for (int i : shared) is_shared[i] = true;

  // seed directions scaled by radius: v_i = b n_i
  std::vector<double> v(k, 0.0), vp(k, 0.0);
  for (int i = 0; i < k; ++i) {
    v[i] = b * seed.n[i];
    vp[i] = bp * seed_p.n[i];
  }
  const std::vector<double> n0vec = restrict_to(seed.n, shared);
  const std::vector<double> np0vec = restrict_to(seed_p.n, shared);
  const double n0 = b > 0 ? vnorm(n0vec) : 0.0;
  double np_par = 0.0;  // component of n'_0 along n_0
  if (n0 > 1e-14)
    for (size_t i = 0; i < shared.size(); ++i) np_par += np0vec[i] * n0vec[i] / n0;
  double np_perp2 = 0.0;
  for (double x : np0vec) np_perp2 += x * x;
  np_perp2 -= np_par * np_par;
  const double np_perp = std::sqrt(std::max(0.0, np_perp2));

  const auto [first, second] = make_states(e);
  auto state_dirs = [&](const std::vector<CMat>& states) {
    std::vector<std::vector<double>> dirs;  // scaled by radius
    for (const auto& rho : states) {
      const GeneralizedBlochState s = state_to_bloch(rho, g);
      std::vector<double> d(k, 0.0);
      for (int i = 0; i < k; ++i) d[i] = s.a * s.n[i];
      dirs.push_back(std::move(d));
    }
    return dirs;
  };
  const auto dirs = state_dirs(first);
  const auto dirs_p = state_dirs(second);

  std::vector<Candidate> cands;

  // degenerate guesses
  auto guess = [&](bool first_set) {
    Candidate c;
    c.branch = Branch::DegenerateIdentity;
    c.p = first_set ? e.eta : e.eta_prime;
    c.detail = first_set ? "Pi_1 = I (guess first set)" : "Pi'_1 = I (guess second set)";
    std::vector<CMat> els(e.total(), CMat::zero(e.d));
    els[first_set ? 0 : e.n()] = CMat::identity(e.d);
    c.povm = Povm::from_elements(els, e.n());
    c.povm.factorize();
    c.built = true;
    cands.push_back(std::move(c));
  };
  guess(true);
  guess(false);

  // shared-subspace direction of m_0: antiparallel to eta b n0 - eta' b' n'_0
  std::vector<double> wvec(shared.size(), 0.0);  // eta' b' n'_0 - eta b n0 (shared coords)
  for (size_t i = 0; i < shared.size(); ++i)
    wvec[i] = e.eta_prime * bp * np0vec[i] - e.eta * b * n0vec[i];
  const double wnorm = vnorm(wvec);

  auto build_reducible_candidate = [&](double p, double s_first, double s_second,
                                       bool include_first, bool include_second, Branch br,
                                       std::string detail,
                                       std::optional<QuadraticInfo> quad) {
    // s_first/s_second: norms of the shared-subspace components of m and m'
    // (m_0 = s_first * w_hat, m'_0 = -s_second * w_hat)
    Candidate c;
    c.branch = br;
    c.p = p;
    c.detail = std::move(detail);
    c.quadratic = std::move(quad);
    if (p <= std::max(e.eta, e.eta_prime) + 1e-12 || p > 1.0 + 1e-9) {
      c.built = false;
      c.fail_reason = "root outside (max prior, 1]";
      cands.push_back(std::move(c));
      return;
    }
    const double q1 = e.eta / (p - e.eta);
    const double q2 = e.eta_prime / (p - e.eta_prime);
    std::vector<std::vector<double>> mvecs, mvecs_p;
    for (const auto& dvec : dirs) {
      std::vector<double> m(k, 0.0);
      for (int i = 0; i < k; ++i)
        if (!is_shared[i]) m[i] = -q1 * dvec[i];
      for (size_t i = 0; i < shared.size(); ++i)
        m[shared[i]] = wnorm > 1e-14 ? s_first * wvec[i] / wnorm : 0.0;
      mvecs.push_back(std::move(m));
    }
    for (const auto& dvec : dirs_p) {
      std::vector<double> m(k, 0.0);
      for (int i = 0; i < k; ++i)
        if (!is_shared[i]) m[i] = -q2 * dvec[i];
      for (size_t i = 0; i < shared.size(); ++i)
        m[shared[i]] = wnorm > 1e-14 ? -s_second * wvec[i] / wnorm : 0.0;
      mvecs_p.push_back(std::move(m));
    }
    // unit norms are forced by the root; verify before building
    if (include_first && std::abs(vnorm(mvecs.front()) - 1.0) > 1e-7) {
      c.built = false;
      c.fail_reason = "first-set measurement direction not unit";
      cands.push_back(std::move(c));
      return;
    }
    if (include_second && std::abs(vnorm(mvecs_p.front()) - 1.0) > 1e-7) {
      c.built = false;
      c.fail_reason = "second-set measurement direction not unit";
      cands.push_back(std::move(c));
      return;
    }
    std::vector<CMat> shapes = gamma_shapes(mvecs, g);
    const std::vector<CMat> shapes_p = gamma_shapes(mvecs_p, g);
    shapes.insert(shapes.end(), shapes_p.begin(), shapes_p.end());
    std::vector<bool> forced(e.total(), false);
    for (int j = 0; j < e.n(); ++j) forced[j] = !include_first;
    for (int j = 0; j < e.n_prime(); ++j) forced[e.n() + j] = !include_second;
    try {
      const std::vector<double> w = recover_weights(completeness_system(shapes, e.d, forced));
      c.povm = povm_from_shapes(shapes, w, e.d, e.n());
      c.built = true;
    } catch (const Infeasible& ex) {
      c.built = false;
      c.fail_reason = ex.what();
    }
    cands.push_back(std::move(c));
  };

  // generic branch: bisection on the monotone stationarity equation
  // (p-eta) s(p) + (p-eta') s'(p) = |eta b n0 - eta' b' n'_0| (as a vector)
  if (wnorm > 1e-12) {
    const double r1 = e.eta * b * std::sqrt(std::max(0.0, 1.0 - n0 * n0));
    const double r2 =
        e.eta_prime * bp *
        std::sqrt(std::max(0.0, 1.0 - np_par * np_par - np_perp * np_perp));
    auto F = [&](double p) {
      const double x = (p - e.eta) * (p - e.eta) - r1 * r1;
      const double y = (p - e.eta_prime) * (p - e.eta_prime) - r2 * r2;
      return std::sqrt(std::max(0.0, x)) + std::sqrt(std::max(0.0, y)) - wnorm;
    };
    double lo = std::max(e.eta + r1, e.eta_prime + r2);
    double hi = std::max(1.5, lo + 1.0);
    if (F(lo) <= 0.0 && F(hi) >= 0.0) {
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (F(mid) <= 0.0 ? lo : hi) = mid;
      }
      const double p = 0.5 * (lo + hi);
      const double s1 =
          std::sqrt(std::max(0.0, (p - e.eta) * (p - e.eta) - r1 * r1)) / (p - e.eta);
      const double s2 = std::sqrt(std::max(0.0, (p - e.eta_prime) * (p - e.eta_prime) -
                                                    r2 * r2)) /
                        (p - e.eta_prime);
      QuadraticInfo quad = reducible_quadratic(e.eta, e.eta_prime, b, bp, n0, np_par, np_perp);
      build_reducible_candidate(p, s1, s2, true, true, Branch::MQubitRed,
                                "generic root (stationarity bisection)", quad);
    }
  }

  // anchored branches: shared-subspace component of one set's measurement
  // vanishes, p = eta (1 + b sqrt(1 - n0^2)) or the primed mirror
  if (b > 1e-14) {
    const double p = e.eta * (1.0 + b * std::sqrt(std::max(0.0, 1.0 - n0 * n0)));
    if (p > std::max(e.eta, e.eta_prime) + 1e-12) {
      // m'_0 from beta: 2^m beta = eta b n0vec (vector), both variants
      const double q2 = e.eta_prime / (p - e.eta_prime);
      double cprime2 = 0.0;
      for (size_t i = 0; i < shared.size(); ++i) {
        const double comp = (e.eta * v[shared[i]] - e.eta_prime * vp[shared[i]]) /
                            (p - e.eta_prime);
        cprime2 += comp * comp;
      }
      cprime2 += q2 * q2 * bp * bp * (1.0 - std::min(1.0, np_par * np_par + np_perp * np_perp));
      // norm of m' vector, to decide primed participation
      const double wl = wnorm > 1e-14 ? wnorm / (p - e.eta_prime) : 0.0;
      build_reducible_candidate(p, 0.0, wl, true, false, Branch::MQubitRed,
                                "first-set anchor (m_0 = 0), primed excluded", std::nullopt);
      if (std::abs(std::sqrt(cprime2) - 1.0) <= 1e-8)
        build_reducible_candidate(p, 0.0, wl, true, true, Branch::MQubitRed,
                                  "first-set anchor (m_0 = 0), primed active", std::nullopt);
    }
  }
  if (bp > 1e-14) {
    const double np_tot2 = np_par * np_par + np_perp * np_perp;
    const double p = e.eta_prime * (1.0 + bp * std::sqrt(std::max(0.0, 1.0 - np_tot2)));
    if (p > std::max(e.eta, e.eta_prime) + 1e-12) {
      const double wl = wnorm > 1e-14 ? wnorm / (p - e.eta) : 0.0;
      build_reducible_candidate(p, wl, 0.0, false, true, Branch::MQubitRed,
                                "second-set anchor (m'_0 = 0), unprimed excluded", std::nullopt);
      const double q1 = e.eta / (p - e.eta);
      double c2 = q1 * q1 * b * b * (1.0 - n0 * n0) + wl * wl;
      if (std::abs(std::sqrt(c2) - 1.0) <= 1e-8)
        build_reducible_candidate(p, wl, 0.0, true, true, Branch::MQubitRed,
                                  "second-set anchor (m'_0 = 0), unprimed active", std::nullopt);
    }
  }

  return pick_certified(e, cands, "solve_mqubit_reducible");
}

SolveReport solve_auto(const TwoSetEnsemble& e) {
  e.validate();
  const bool irr = irreducibility_test(e.U).is_irreducible &&
                   irreducibility_test(e.U_prime).is_irreducible;
  if (e.d == 2 && !irr) return solve_qubit_two_sets(e);
  if (irr && e.n() >= 2 && e.n_prime() >= 2) {
    int mm = 0;
    for (int t = 2, kk = 1; t <= 16; t <<= 1, ++kk)
      if (t == e.d) mm = kk;
    if (mm >= 2) {
      try {
        return solve_mqubit_irreducible(e, dirac_gammas(mm));
      } catch (const OutsideFamily&) {
        // not a generalized Bloch seed; the general formula still applies
      }
    }
    return solve_irreducible(e);
  }
  int mm = 0;
  for (int t = 2, kk = 1; t <= 16; t <<= 1, ++kk)
    if (t == e.d) mm = kk;
  if (mm >= 1) return solve_mqubit_reducible(e, dirac_gammas(mm));
  throw GeometryUnsupported("solve_auto: no solver matches this ensemble's geometry");
}

}  // namespace medkit
