#include <cmath>
#include <sstream>

#include "medkit/closedform.hpp"
#include "solver_common.hpp"

namespace medkit {

using detail::Candidate;
using detail::gamma_shapes;
using detail::pick_certified;
using detail::povm_from_shapes;
using detail::vnorm;

namespace {

constexpr double kGeomTol = 1e-9;

// Bloch vectors scaled by radius, v = b n, for every state of one set.
std::vector<std::vector<double>> bloch_vectors(const std::vector<CMat>& states,
                                               const GammaSet& g) {
  std::vector<std::vector<double>> out;
  for (const auto& rho : states) {
    const GeneralizedBlochState s = state_to_bloch(rho, g);
    std::vector<double> v(3, 0.0);
    for (int i = 0; i < 3; ++i) v[i] = s.a * s.n[i];
    out.push_back(std::move(v));
  }
  return out;
}

void require_zrotations(const TwoSetEnsemble& e, const GammaSet& g, const char* who) {
  const CMat& sz = g.gammas[2];
  for (const auto& u : e.U)
    if ((conj_by(u, sz) - sz).fnorm() > kGeomTol)
      throw GeometryUnsupported(std::string(who) + ": first-set unitaries must fix sigma_z");
  for (const auto& u : e.U_prime)
    if ((conj_by(u, sz) - sz).fnorm() > kGeomTol)
      throw GeometryUnsupported(std::string(who) + ": second-set unitaries must fix sigma_z");
}

void add_identity_guesses(const TwoSetEnsemble& e, std::vector<Candidate>& cands) {
  for (int which = 0; which < 2; ++which) {
    Candidate c;
    c.branch = Branch::DegenerateIdentity;
    c.p = which == 0 ? e.eta : e.eta_prime;
    c.detail = which == 0 ? "Pi_1 = I (guess first set)" : "Pi'_1 = I (guess second set)";
    std::vector<CMat> els(e.total(), CMat::zero(e.d));
    els[which == 0 ? 0 : e.n()] = CMat::identity(e.d);
    c.povm = Povm::from_elements(els, e.n());
    c.povm.factorize();
    c.built = true;
    cands.push_back(std::move(c));
  }
}

// Candidate with measurement directions m^(j), m'^(j); one set may be
// excluded, its weights pinned to zero.
void add_direction_candidate(const TwoSetEnsemble& e, const GammaSet& g,
                             std::vector<Candidate>& cands, double p,
                             const std::vector<std::vector<double>>& mvecs,
                             const std::vector<std::vector<double>>& mvecs_p,
                             bool include_first, bool include_second, Branch br,
                             std::string detail, std::optional<QuadraticInfo> quad) {
  Candidate c;
  c.branch = br;
  c.p = p;
  c.detail = std::move(detail);
  c.quadratic = std::move(quad);
  if (p <= std::max(e.eta, e.eta_prime) + 1e-12 || p > 1.0 + 1e-9) {
    c.built = false;
    c.fail_reason = "p outside (max prior, 1]";
    cands.push_back(std::move(c));
    return;
  }
  if (include_first && std::abs(vnorm(mvecs.front()) - 1.0) > 1e-6) {
    c.built = false;
    c.fail_reason = "first-set measurement direction not unit";
    cands.push_back(std::move(c));
    return;
  }
  if (include_second && std::abs(vnorm(mvecs_p.front()) - 1.0) > 1e-6) {
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
}

Branch classify_case(double mz, double mz_p) {
  const bool z1 = std::abs(mz) > 1e-9;
  const bool z2 = std::abs(mz_p) > 1e-9;
  if (z1 && z2) return Branch::QubitCase1;
  if (!z1 && !z2) return Branch::QubitCase2;
  if (!z1) return Branch::QubitCase3;
  return Branch::QubitCase4;
}

}  // namespace

SolveReport solve_qubit_two_sets(const TwoSetEnsemble& e) {
  e.validate();
  if (e.d != 2) throw GeometryUnsupported("solve_qubit_two_sets: qubit ensembles only");
  const GammaSet g = dirac_gammas(1);
  require_zrotations(e, g, "solve_qubit_two_sets");

  const auto [first, second] = make_states(e);
  const auto v = bloch_vectors(first, g);    // v^(j) = b n^(j)
  const auto vp = bloch_vectors(second, g);  // v'^(j) = b' n'^(j)
  const double b = vnorm(v[0]);
  const double bp = vnorm(vp[0]);
  const double vz = v[0][2], vpz = vp[0][2];  // b n_z, b' n'_z (shared across each set)
  const double rxy = std::sqrt(std::max(0.0, b * b - vz * vz));       // b sqrt(1 - n_z^2)
  const double rxy_p = std::sqrt(std::max(0.0, bp * bp - vpz * vpz));

  std::vector<Candidate> cands;
  add_identity_guesses(e, cands);

  auto first_dirs = [&](double p, double beta2) {
    // beta2 = 2 beta; m^(j) = (-eta v_xy^(j), beta2 - eta v_z) / (p - eta)
    std::vector<std::vector<double>> m;
    for (const auto& vj : v)
      m.push_back({-e.eta * vj[0] / (p - e.eta), -e.eta * vj[1] / (p - e.eta),
                   (beta2 - e.eta * vz) / (p - e.eta)});
    return m;
  };
  auto second_dirs = [&](double p, double beta2) {
    std::vector<std::vector<double>> m;
    for (const auto& vj : vp)
      m.push_back({-e.eta_prime * vj[0] / (p - e.eta_prime),
                   -e.eta_prime * vj[1] / (p - e.eta_prime),
                   (beta2 - e.eta_prime * vpz) / (p - e.eta_prime)});
    return m;
  };

  // generic branch: both z-components nonzero, p from the quadratic
  const double G = e.eta * vz - e.eta_prime * vpz;
  const double K = e.eta * e.eta * (b * b - 1.0) -
                   e.eta_prime * e.eta_prime * (bp * bp - 1.0);
  const double delta = e.eta - e.eta_prime;
  if (std::abs(G) > 1e-12) {
    QuadraticInfo q;
    q.A = delta * delta - G * G;
    q.B = K * delta - 2.0 * e.eta * vz * delta * G + 2.0 * e.eta * G * G;
    q.C = K * K + 4.0 * e.eta * e.eta * (b * b - 1.0) * G * G - 4.0 * e.eta * vz * K * G;
    q.A_printed = q.A;
    q.B_printed = q.B;
    q.C_printed = q.C;
    double disc = q.B * q.B - q.A * q.C;
    if (disc < 0.0 && disc > -1e-12) disc = 0.0;
    if (disc >= 0.0) {
      std::vector<double> roots;
      if (std::abs(q.A) < 1e-12 * std::max(std::abs(q.B), std::abs(q.C))) {
        if (std::abs(q.B) > 0.0) roots.push_back(-q.C / (4.0 * q.B));
      } else {
        roots.push_back((-q.B + std::sqrt(disc)) / (2.0 * q.A));
        roots.push_back((-q.B - std::sqrt(disc)) / (2.0 * q.A));
      }
      std::sort(roots.rbegin(), roots.rend());
      q.root = roots.empty() ? std::nan("") : roots.front();
      q.other_root = roots.size() > 1 ? roots.back() : std::nan("");
      q.root_printed = q.root;
      q.discrepancy = 0.0;
      // Each root solves the pair of singularity conditions
      //   (p - eta)^2   - (2b - eta v_z)^2   = eta^2   (b^2  - v_z^2)
      //   (p - eta')^2  - (2b - eta' v'_z)^2 = eta'^2  (b'^2 - v'_z^2)
      // only up to the conditioning of the eliminated quadratic, so polish
      // (p, 2 beta) with a few Newton steps on the pair directly.
      auto polish = [&](double p, double beta2) {
        for (int it = 0; it < 8; ++it) {
          const double f1 = (p - e.eta) * (p - e.eta) -
                            (beta2 - e.eta * vz) * (beta2 - e.eta * vz) -
                            e.eta * e.eta * (b * b - vz * vz);
          const double f2 = (p - e.eta_prime) * (p - e.eta_prime) -
                            (beta2 - e.eta_prime * vpz) * (beta2 - e.eta_prime * vpz) -
                            e.eta_prime * e.eta_prime * (bp * bp - vpz * vpz);
          const double j11 = 2.0 * (p - e.eta), j12 = -2.0 * (beta2 - e.eta * vz);
          const double j21 = 2.0 * (p - e.eta_prime), j22 = -2.0 * (beta2 - e.eta_prime * vpz);
          const double det = j11 * j22 - j12 * j21;
          if (std::abs(det) < 1e-14) break;
          const double dp = (f1 * j22 - f2 * j12) / det;
          const double db = (j11 * f2 - j21 * f1) / det;
          p -= dp;
          beta2 -= db;
          if (std::abs(dp) + std::abs(db) < 1e-15) break;
        }
        return std::pair<double, double>{p, beta2};
      };
      for (size_t r = 0; r < roots.size(); ++r) {
        double p = roots[r];
        if (!(p > std::max(e.eta, e.eta_prime) + 1e-12 && p <= 1.0 + 1e-9)) continue;
        double beta2 = (K + 2.0 * delta * p) / (2.0 * G);  // 2 beta
        const auto [pp, bb] = polish(p, beta2);
        if (std::abs(pp - p) < 1e-6) {
          p = pp;
          beta2 = bb;
        }
        const auto m = first_dirs(p, beta2);
        const auto mp = second_dirs(p, beta2);
        add_direction_candidate(e, g, cands, p, m, mp, true, true,
                                classify_case(m[0][2], mp[0][2]),
                                r == 0 ? "quadratic, larger root" : "quadratic, smaller root",
                                q);
      }
    }
  }

  // equatorial anchors: one set's measurement z-component vanishes,
  // p = eta (1 + b sqrt(1 - n_z^2)) or the primed mirror
  if (rxy > 1e-12) {
    const double p = e.eta + e.eta * rxy;
    if (p > std::max(e.eta, e.eta_prime) + 1e-12) {
      const double beta2 = e.eta * vz;  // forces m_z = 0
      const auto m = first_dirs(p, beta2);
      const auto mp = second_dirs(p, beta2);
      const Branch br = std::abs(e.eta * vz - e.eta_prime * vpz) <= 1e-9 ? Branch::QubitCase2
                                                                         : Branch::QubitCase3;
      add_direction_candidate(e, g, cands, p, m, mp, true, false, br,
                              "first-set equator anchor, primed excluded", std::nullopt);
      if (std::abs(vnorm(mp[0]) - 1.0) <= 1e-8)
        add_direction_candidate(e, g, cands, p, m, mp, true, true, br,
                                "first-set equator anchor, primed active", std::nullopt);
    }
  }
  if (rxy_p > 1e-12) {
    const double p = e.eta_prime + e.eta_prime * rxy_p;
    if (p > std::max(e.eta, e.eta_prime) + 1e-12) {
      const double beta2 = e.eta_prime * vpz;  // forces m'_z = 0
      const auto m = first_dirs(p, beta2);
      const auto mp = second_dirs(p, beta2);
      const Branch br = std::abs(e.eta * vz - e.eta_prime * vpz) <= 1e-9 ? Branch::QubitCase2
                                                                         : Branch::QubitCase4;
      add_direction_candidate(e, g, cands, p, m, mp, false, true, br,
                              "second-set equator anchor, unprimed excluded", std::nullopt);
      if (std::abs(vnorm(m[0]) - 1.0) <= 1e-8)
        add_direction_candidate(e, g, cands, p, m, mp, true, true, br,
                                "second-set equator anchor, unprimed active", std::nullopt);
    }
  }

  return pick_certified(e, cands, "solve_qubit_two_sets");
}

namespace {

struct PrintedBranch {
  int index = 0;           // 1-based position in the piecewise list
  double p = 0.0;
  bool matches = false;
  // per-state Bloch vectors of the printed POVM shapes, I + f.sigma;
  // excluded sets carry include=false
  std::vector<std::vector<double>> f, f_prime;
  bool include_first = true, include_second = true;
};

}  // namespace

SolveReport solve_special_case(int which, const TwoSetEnsemble& e) {
  if (which < 1 || which > 3)
    throw std::invalid_argument("solve_special_case: which must be 1, 2 or 3");
  e.validate();
  if (e.d != 2) throw GeometryUnsupported("solve_special_case: qubit ensembles only");
  const GammaSet g = dirac_gammas(1);
  require_zrotations(e, g, "solve_special_case");

  const auto [first, second] = make_states(e);
  const auto v = bloch_vectors(first, g);
  const auto vp = bloch_vectors(second, g);
  const double b = vnorm(v[0]);
  const double bp = vnorm(vp[0]);
  if (std::abs(b - 1.0) > kGeomTol || std::abs(bp - 1.0) > kGeomTol)
    throw GeometryUnsupported("solve_special_case: states must be pure");
  const double nz = v[0][2];
  const double eta = e.eta, etap = e.eta_prime;
  const int n = e.n();

  if (which == 1) {
    if (e.n_prime() != 1 || vnorm({vp[0][0], vp[0][1]}) > kGeomTol || vp[0][2] < 1.0 - kGeomTol)
      throw GeometryUnsupported("solve_special_case 1: second set must be the single +z state");
  } else if (which == 2) {
    if (e.n_prime() != 1 || std::abs(vp[0][0]) > kGeomTol || std::abs(vp[0][1] - 1.0) > kGeomTol ||
        std::abs(vp[0][2]) > kGeomTol)
      throw GeometryUnsupported("solve_special_case 2: second set must be the single +y state");
  } else {
    if (n != 2 || e.n_prime() != 2 || std::abs(vp[0][2]) > kGeomTol)
      throw GeometryUnsupported("solve_special_case 3: two states per set, second set on equator");
  }

  const double root_eq = std::sqrt(std::max(0.0, 1.0 - nz * nz));
  std::vector<PrintedBranch> branches;

  auto xy_over = [&](const std::vector<std::vector<double>>& vecs, double scale, double fz) {
    std::vector<std::vector<double>> out;
    for (const auto& vj : vecs) out.push_back({scale * vj[0], scale * vj[1], fz});
    return out;
  };
  auto zeros = [&](size_t count) {
    return std::vector<std::vector<double>>(count, std::vector<double>(3, 0.0));
  };

  if (which == 1) {
    {  // interior branch
      PrintedBranch br;
      br.index = 1;
      const double den = eta * (1.0 + nz) - 2.0 * etap;
      if (std::abs(den) > 1e-12) {
        const double mid = 2.0 * etap * (eta - etap) / den;
        br.p = 2.0 * etap * (eta * nz - etap) / den;
        br.matches = (eta * nz < mid && mid < etap) || (eta * nz > mid && mid > etap);
        if (br.matches) {
          const double q = eta / (br.p - eta);
          const double fz = -((eta - etap) * br.p - eta * nz * (eta * nz - etap)) /
                            ((eta * nz - etap) * (br.p - eta));
          const double fzp = -((eta - etap) * br.p - etap * (eta * nz - etap)) /
                             ((eta * nz - etap) * (br.p - etap));
          br.f = xy_over(v, q, fz);
          br.f_prime = {{0.0, 0.0, fzp}};
        }
      }
      branches.push_back(br);
    }
    {  // equatorial branch
      PrintedBranch br;
      br.index = 2;
      br.p = eta * (1.0 + root_eq);
      const double den = nz * nz + eta * nz - 1.0 - n - (1.0 + n) * root_eq;
      const double bound = std::abs(den) > 1e-12 ? (nz - 1.0 - root_eq) / den : -1.0;
      br.matches = std::abs(eta * nz - etap) <= 1e-9 ||
                   (std::abs(den) > 1e-12 && eta <= bound + 1e-12);
      if (br.matches && root_eq > 1e-12) {
        br.f = xy_over(v, 1.0 / root_eq, 0.0);
        br.f_prime = zeros(1);
        br.include_second = false;
      } else if (br.matches) {
        br.matches = false;  // n_z = +-1 leaves the printed shape undefined
      }
      branches.push_back(br);
    }
  } else {
    // cases 2 and 3 share the first branch formula
    {
      PrintedBranch br;
      br.index = 1;
      const double den = eta * eta * nz * nz - (eta - etap) * (eta - etap);
      if (std::abs(den) > 1e-12 && std::abs(nz) > 1e-12) {
        const double ratio = (eta - etap) * etap / den;
        br.p = 2.0 * eta * eta * etap * nz * nz / den;
        br.matches = ratio > 0.0 && ratio < 0.5;
        if (br.matches) {
          const double q = eta / (br.p - eta);
          const double fz =
              -((eta - etap) * br.p - eta * eta * nz * nz) / (eta * nz * (br.p - eta));
          const double fzp = -(eta - etap) * br.p / (eta * nz * (br.p - etap));
          br.f = xy_over(v, q, fz);
          if (which == 2)
            br.f_prime = {{0.0, etap / (br.p - etap), fzp}};
          else
            br.f_prime = xy_over(vp, etap / (br.p - etap), fzp);
        }
      }
      branches.push_back(br);
    }
    if (which == 2) {
      {
        PrintedBranch br;
        br.index = 2;
        br.p = 2.0 * eta;
        br.matches = std::abs(nz) <= 1e-9 && eta >= 1.0 / (1.0 + n) - 1e-12;
        if (br.matches) {
          br.f = xy_over(v, 1.0, 0.0);
          br.f_prime = {{0.0, 1.0, 0.0}};
        }
        branches.push_back(br);
      }
      {
        PrintedBranch br;
        br.index = 3;
        br.p = eta * (1.0 + root_eq);
        br.matches = std::abs(nz) > 1e-9 && root_eq > 1e-12 &&
                     eta >= 1.0 / (n + root_eq) - 1e-12;
        if (br.matches) {
          br.f = xy_over(v, 1.0 / root_eq, 0.0);
          br.f_prime = zeros(1);
          br.include_second = false;
        }
        branches.push_back(br);
      }
      {
        PrintedBranch br;
        br.index = 4;
        br.p = eta;
        br.matches = std::abs(nz) > 1e-9 && std::abs(eta - 1.0 / (1.0 + n)) <= 1e-9;
        if (br.matches) {
          br.f = zeros(v.size());
          br.include_first = false;
          br.f_prime = zeros(1);  // Pi'_1 = I handled below as a plain identity element
        }
        branches.push_back(br);
      }
    } else {
      {
        PrintedBranch br;
        br.index = 2;
        br.p = 2.0 * eta;
        br.matches = std::abs(nz) <= 1e-9 && eta >= 0.25 - 1e-12;
        if (br.matches) {
          br.f = xy_over(v, 0.5, 0.0);
          br.f_prime = xy_over(vp, 1.0, 0.0);
        }
        branches.push_back(br);
      }
      {
        PrintedBranch br;
        br.index = 3;
        br.p = eta * (1.0 + root_eq);
        br.matches = std::abs(nz) > 1e-9 && root_eq > 1e-12 &&
                     eta >= 1.0 / (2.0 + root_eq) - 1e-12;
        if (br.matches) {
          br.f = xy_over(v, 1.0 / root_eq, 0.0);
          br.f_prime = zeros(2);
          br.include_second = false;
        }
        branches.push_back(br);
      }
      {
        PrintedBranch br;
        br.index = 4;
        br.p = 2.0 * etap;
        br.matches = std::abs(nz) <= 1e-9 && eta <= 0.25 + 1e-12;
        if (br.matches) {
          br.f = xy_over(v, 1.0, 0.0);
          br.f_prime = xy_over(vp, 1.0, 0.0);
        }
        branches.push_back(br);
      }
      {
        PrintedBranch br;
        br.index = 5;
        br.p = 2.0 * etap;
        br.matches = std::abs(nz) > 1e-9 && eta <= 0.25 + 1e-12;
        if (br.matches) {
          br.f = zeros(2);
          br.include_first = false;
          br.f_prime = xy_over(vp, 1.0, 0.0);
        }
        branches.push_back(br);
      }
    }
  }

  std::vector<const PrintedBranch*> matched;
  for (const auto& br : branches)
    if (br.matches) matched.push_back(&br);

  for (size_t i = 0; i < matched.size(); ++i)
    for (size_t j = i + 1; j < matched.size(); ++j)
      if (std::abs(matched[i]->p - matched[j]->p) > 1e-9) {
        std::ostringstream os;
        os << "solve_special_case " << which << ": branch conditions " << matched[i]->index
           << " and " << matched[j]->index << " hold simultaneously with p="
           << matched[i]->p << " vs p=" << matched[j]->p;
        throw ConditionAmbiguous(os.str());
      }

  const Branch label = which == 1   ? Branch::Special1
                       : which == 2 ? Branch::Special2
                                    : Branch::Special3;

  std::string finding;
  if (!matched.empty()) {
    const PrintedBranch& br = *matched.front();
    // piecewise-case-2 branch 4 guesses the second set outright
    if (which == 2 && br.index == 4) {
      SolveReport rep;
      std::vector<CMat> els(e.total(), CMat::zero(2));
      els[e.n()] = CMat::identity(2);
      Povm povm = Povm::from_elements(els, e.n());
      povm.factorize();
      rep.certificate = certificate(e, povm, br.p);
      if (rep.certificate.certified()) {
        rep.p_opt = br.p;
        rep.branch = label;
        rep.branch_detail = "printed branch 4 (Pi'_1 = I)";
        rep.povm = povm;
        return rep;
      }
      finding = "printed branch 4 failed certification";
    } else {
      std::vector<CMat> shapes;
      for (const auto& f : br.f) {
        CMat s = CMat::identity(2);
        s += dot_gamma(f, g);
        shapes.push_back(s);
      }
      for (const auto& f : br.f_prime) {
        CMat s = CMat::identity(2);
        s += dot_gamma(f, g);
        shapes.push_back(s);
      }
      std::vector<bool> forced(e.total(), false);
      for (int j = 0; j < e.n(); ++j) forced[j] = !br.include_first;
      for (int j = 0; j < e.n_prime(); ++j) forced[e.n() + j] = !br.include_second;
      try {
        const std::vector<double> w = recover_weights(completeness_system(shapes, 2, forced));
        Povm povm = povm_from_shapes(shapes, w, 2, e.n());
        OptimalityCertificate cert = certificate(e, povm, br.p);
        if (cert.certified()) {
          SolveReport rep;
          rep.p_opt = br.p;
          rep.branch = label;
          rep.branch_detail = "printed branch " + std::to_string(br.index);
          rep.povm = std::move(povm);
          rep.certificate = std::move(cert);
          return rep;
        }
        finding = "printed branch " + std::to_string(br.index) +
                  " failed certification at p=" + std::to_string(br.p) +
                  " (worst residual " + std::to_string(cert.worst_margin()) + ")";
      } catch (const Infeasible& ex) {
        finding = "printed branch " + std::to_string(br.index) +
                  " weights infeasible: " + ex.what();
      }
    }
  } else {
    finding = "no printed branch condition matches";
  }

  SolveReport rep;
  try {
    rep = solve_qubit_two_sets(e);
  } catch (const NoBranchCertifies&) {
    if (matched.empty()) throw;
    // The printed condition held but neither its measurement nor any general
    // branch certifies (the single off-axis state breaks the rotation
    // symmetry the branch taxonomy assumes). Surface the printed value with
    // a Rejected certificate instead of hiding the disagreement.
    const PrintedBranch& br = *matched.front();
    rep.p_opt = br.p;
    rep.branch = label;
    rep.branch_detail = "special case " + std::to_string(which) + ": " + finding +
                        "; no general branch certifies either, printed value returned "
                        "uncertified";
    return rep;
  }
  rep.branch_detail = "special case " + std::to_string(which) + ": " + finding +
                      "; fallback " + branch_name(rep.branch) + ": " + rep.branch_detail;
  rep.branch = Branch::Fallback;
  return rep;
}

}  // namespace medkit
