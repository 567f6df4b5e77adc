#include "medkit/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "medkit/eig.hpp"
#include "medkit/rng.hpp"

namespace medkit {

namespace {

std::vector<CMat> weighted_states(const TwoSetEnsemble& e) {
  const auto states = all_states(e);
  std::vector<CMat> w;
  for (int k = 0; k < e.total(); ++k) w.push_back(cplx(e.prior(k), 0.0) * states[k]);
  return w;
}

CMat hermitize(const CMat& m) {
  CMat h(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  return h;
}

double dual_bound_impl(const TwoSetEnsemble& e, const std::vector<CMat>& w, const Povm& p) {
  const CMat mh = hermitize(build_M(e, p));
  double eps = 0.0;
  for (const auto& wk : w) eps = std::max(eps, max_eig_herm(hermitize(wk - mh)));
  return mh.trace().real() + e.d * eps;
}

// random PSD start, renormalized to a POVM
Povm random_povm(int d, int count, Xoshiro256ss& rng) {
  std::vector<CMat> gs;
  CMat s(d);
  for (int k = 0; k < count; ++k) {
    CMat a(d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) a(i, j) = cplx(rng.normal(), rng.normal());
    CMat g = a.adjoint() * a;
    g += cplx(1e-6, 0.0) * CMat::identity(d);
    s += g;
    gs.push_back(std::move(g));
  }
  const CMat si = pinv_sqrt(s);
  Povm p;
  for (auto& g : gs) p.elements.push_back(si * g * si);
  return p;
}

// project onto the POVM set: positive parts renormalized by S^{-1/2}
void renormalize(Povm& p, int d) {
  CMat s(d);
  for (auto& el : p.elements) {
    el = herm_func(hermitize(el), [](double x) { return std::max(0.0, x); });
    s += el;
  }
  const CMat si = pinv_sqrt(s);
  const double support_gap = (s * si * si - CMat::identity(d)).fnorm();
  if (support_gap > 1e-6) {
    // deficient support: pad the first element so completeness holds
    CMat pad = CMat::identity(d) - s * si * si;
    p.elements.front() += pad;
    s += pad;
  }
  const CMat si2 = pinv_sqrt(s);
  for (auto& el : p.elements) el = si2 * el * si2;
}

}  // namespace

double dual_bound(const TwoSetEnsemble& e, const Povm& p) {
  return dual_bound_impl(e, weighted_states(e), p);
}

OracleResult med_fixed_point(const TwoSetEnsemble& e, int max_iters, double gap) {
  e.validate();
  if (max_iters < 1) throw std::invalid_argument("med_fixed_point: max_iters >= 1");
  if (gap <= 0.0) throw std::invalid_argument("med_fixed_point: gap > 0");
  const int d = e.d;
  const int count = e.total();
  const auto w = weighted_states(e);

  Xoshiro256ss restart_rng(0x6d656466697870ULL);  // fixed stream for restarts
  for (int attempt = 0; attempt <= 5; ++attempt) {
    Povm p;
    p.n_first = e.n();
    if (attempt == 0) {
      for (int k = 0; k < count; ++k)
        p.elements.push_back(cplx(1.0 / count, 0.0) * CMat::identity(d));
    } else {
      p = random_povm(d, count, restart_rng);
      p.n_first = e.n();
    }

    OracleResult best;
    best.povm = p;
    best.p_lower = success_probability(e, p);
    best.p_upper = dual_bound_impl(e, w, p);
    bool singular = false;

    for (int it = 1; it <= max_iters; ++it) {
      CMat l(d);
      std::vector<CMat> wpw;
      for (int k = 0; k < count; ++k) {
        CMat t = w[k] * p.elements[k] * w[k];
        l += t;
        wpw.push_back(std::move(t));
      }
      const CMat lh = hermitize(l);
      if (max_eig_herm(lh) < 1e-100) {
        singular = true;
        break;
      }
      const CMat li = pinv_sqrt(lh);
      for (int k = 0; k < count; ++k) p.elements[k] = li * wpw[k] * li;

      const double lo = success_probability(e, p);
      const double up = dual_bound_impl(e, w, p);
      if (lo > best.p_lower) {
        best.p_lower = lo;
        best.povm = p;
      }
      best.p_upper = std::min(best.p_upper, up);
      best.iterations = it;
      if (best.p_upper - best.p_lower <= gap) {
        best.converged = true;
        return best;
      }
    }
    if (!singular) return best;  // converged = false, best iterate
  }
  throw SingularL("med_fixed_point: iteration support collapsed after 5 restarts");
}

OracleResult random_restart_ascent(const TwoSetEnsemble& e, int restarts, uint64_t seed) {
  e.validate();
  if (restarts < 1) throw std::invalid_argument("random_restart_ascent: restarts >= 1");
  const int d = e.d;
  const int count = e.total();
  const auto w = weighted_states(e);
  Xoshiro256ss rng(seed);

  OracleResult best;
  best.p_lower = -1.0;

  for (int r = 0; r < restarts; ++r) {
    Povm p = random_povm(d, count, rng);
    p.n_first = e.n();
    double val = success_probability(e, p);
    double step = 0.5;
    int iters = 0;
    for (int sweep = 0; sweep < 500; ++sweep) {
      const double before = val;

      // projected step along the gradient direction, adaptive length
      for (int tries = 0; tries < 8 && step > 1e-13; ++tries) {
        Povm trial = p;
        for (int k = 0; k < count; ++k) trial.elements[k] += cplx(step, 0.0) * w[k];
        renormalize(trial, d);
        const double tval = success_probability(e, trial);
        if (tval > val + 1e-15) {
          p = std::move(trial);
          val = tval;
          step = std::min(step * 1.5, 4.0);
          break;
        }
        step *= 0.5;
      }

      // exact pairwise redistribution: for each pair, the best split of
      // G = Pi_j + Pi_k is X = G^(1/2) P_+ G^(1/2) with P_+ the positive
      // eigenprojector of G^(1/2) (W_j - W_k) G^(1/2)
      for (int j = 0; j < count; ++j)
        for (int k = j + 1; k < count; ++k) {
          const CMat g = hermitize(p.elements[j] + p.elements[k]);
          if (g.fnorm() < 1e-14) continue;
          const CMat gh = herm_func(g, [](double x) { return std::sqrt(std::max(0.0, x)); });
          const CMat b = hermitize(gh * (w[j] - w[k]) * gh);
          const CMat proj = herm_func(b, [](double x) { return x > 0.0 ? 1.0 : 0.0; });
          const CMat x = hermitize(gh * proj * gh);
          const double gain = trace_re(w[j], x) + trace_re(w[k], g - x) -
                              trace_re(w[j], p.elements[j]) - trace_re(w[k], p.elements[k]);
          if (gain > 1e-15) {
            p.elements[j] = x;
            p.elements[k] = g - x;
            val += gain;
          }
        }

      iters = sweep + 1;
      if (val - before < 1e-14) break;
    }
    val = success_probability(e, p);
    const double up = dual_bound_impl(e, w, p);
    if (val > best.p_lower) {
      best.p_lower = val;
      best.povm = p;
      best.iterations = iters;
    }
    best.p_upper = std::min(best.p_upper, up);
  }
  best.converged = best.p_upper - best.p_lower <= 1e-5;
  return best;
}

}  // namespace medkit
