#include "medkit/certify.hpp"

#include <cmath>
#include <sstream>

#include "medkit/eig.hpp"

namespace medkit {

namespace {

constexpr double kDegenerateTol = 1e-12;

double psd_deficit(const CMat& m) {
  // how far below zero the spectrum dips; 0 for PSD input
  CMat h(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  return std::max(0.0, -min_eig_herm(h));
}

}  // namespace

double OptimalityCertificate::worst_margin() const {
  double w = 0.0;
  for (const auto& [k, v] : residuals) w = std::max(w, v);
  return w;
}

double success_probability(const TwoSetEnsemble& e, const Povm& p) {
  if (static_cast<int>(p.elements.size()) != e.total() || p.n_first != e.n())
    throw DimensionMismatch("success_probability: POVM length must be n + n'");
  const auto states = all_states(e);
  double acc = 0.0;
  for (int k = 0; k < e.total(); ++k) {
    if (p.elements[k].dim() != e.d)
      throw DimensionMismatch("success_probability: element dimension mismatch");
    acc += e.prior(k) * trace_re(states[k], p.elements[k]);
  }
  return acc;
}

CMat build_M(const TwoSetEnsemble& e, const Povm& p) {
  if (static_cast<int>(p.elements.size()) != e.total())
    throw DimensionMismatch("build_M: POVM length must be n + n'");
  const auto states = all_states(e);
  CMat m(e.d);
  for (int k = 0; k < e.total(); ++k)
    m += cplx(e.prior(k), 0.0) * (p.elements[k] * states[k]);
  return m;
}

ConjugatePair conjugate_states(const CMat& m, const TwoSetEnsemble& e, double p) {
  ConjugatePair out;
  const auto [first, second] = make_states(e);
  out.degenerate_first = std::abs(p - e.eta) <= kDegenerateTol;
  out.degenerate_second = std::abs(p - e.eta_prime) <= kDegenerateTol;
  if (!out.degenerate_first)
    for (const auto& rho : first)
      out.tau.push_back(cplx(1.0 / (p - e.eta), 0.0) * (m - cplx(e.eta, 0.0) * rho));
  if (!out.degenerate_second)
    for (const auto& rho : second)
      out.tau_prime.push_back(cplx(1.0 / (p - e.eta_prime), 0.0) *
                              (m - cplx(e.eta_prime, 0.0) * rho));
  return out;
}

OptimalityCertificate certificate(const TwoSetEnsemble& e, const Povm& p, double p_opt,
                                  const CertTolerances& tol) {
  OptimalityCertificate cert;
  const auto states = all_states(e);
  const int d = e.d;

  double completeness = p.completeness_residual();
  double povm_psd = 0.0;
  for (const auto& el : p.elements) povm_psd = std::max(povm_psd, psd_deficit(el));

  CMat m = build_M(e, p);
  const double m_herm = m.herm_residual();
  // Hermitize for spectral checks; the skew is reported below.
  CMat mh(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) mh(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  cert.M = mh;

  double m_invariance = m_herm;  // M must be Hermitian and invariant
  for (const auto& u : e.U) m_invariance = std::max(m_invariance, (mh - conj_by(u, mh)).fnorm());
  for (const auto& u : e.U_prime)
    m_invariance = std::max(m_invariance, (mh - conj_by(u, mh)).fnorm());

  const ConjugatePair cp = conjugate_states(mh, e, p_opt);
  cert.tau = cp.tau;
  cert.tau_prime = cp.tau_prime;
  cert.degenerate_first = cp.degenerate_first;
  cert.degenerate_second = cp.degenerate_second;

  double tau_psd = 0.0, tau_trace = 0.0, slackness = 0.0;
  auto scan_taus = [&](const std::vector<CMat>& taus, int offset, double prior) {
    for (size_t j = 0; j < taus.size(); ++j) {
      tau_psd = std::max(tau_psd, psd_deficit(taus[j]));
      tau_trace = std::max(tau_trace, std::abs(taus[j].trace() - cplx(1.0, 0.0)));
      const double s = (p_opt - prior) * trace_re(taus[j], p.elements[offset + j]);
      slackness = std::max(slackness, std::abs(s));
    }
  };
  scan_taus(cp.tau, 0, e.eta);
  scan_taus(cp.tau_prime, e.n(), e.eta_prime);
  // Degenerate branch (p == prior): Eq. (2) collapses to M = p_j rho_j.
  if (cp.degenerate_first)
    for (int j = 0; j < e.n(); ++j)
      tau_psd = std::max(tau_psd, (mh - cplx(e.eta, 0.0) * states[j]).fnorm());
  if (cp.degenerate_second)
    for (int j = 0; j < e.n_prime(); ++j)
      tau_psd = std::max(tau_psd, (mh - cplx(e.eta_prime, 0.0) * states[e.n() + j]).fnorm());

  const double p_consistency =
      std::max(std::abs(p_opt - success_probability(e, p)), std::abs(p_opt - mh.trace().real()));

  cert.alpha = mh.trace().real() / d;
  if (d == 2) {
    const GammaSet g = dirac_gammas(1);
    cert.beta = 0.5 * trace_re(mh, g.gammas[2]);
  }
  // beta_i over the matching gamma family, when d is a power of two
  int mm = 0;
  for (int t = 1, k = 0; t <= 16; t <<= 1, ++k)
    if (t == d) mm = k;
  if (mm >= 1) {
    const GammaSet g = dirac_gammas(mm);
    for (const auto& gamma : g.gammas) cert.beta_i.push_back(trace_re(mh, gamma) / d);
    auto radius = [&](const std::vector<CMat>& taus) -> std::optional<double> {
      if (taus.empty()) return std::nullopt;
      double s = 0.0;
      for (const auto& gamma : g.gammas) {
        const double comp = trace_re(taus.front(), gamma);
        s += comp * comp;
      }
      return std::sqrt(s);
    };
    cert.c = radius(cp.tau);
    cert.c_prime = radius(cp.tau_prime);
  }

  cert.residuals = {{"completeness", completeness}, {"povm_psd", povm_psd},
                    {"tau_psd", tau_psd},           {"tau_trace", tau_trace},
                    {"slackness", slackness},       {"M_invariance", m_invariance},
                    {"p_consistency", p_consistency}};
  // M - p_j rho_j = (p - p_j) tau_j certifies a maximum only when p - p_j >= 0
  // for every prior; below a prior the same residuals would certify the
  // reversed domination instead.
  const bool dominates = p_opt >= std::max(e.eta, e.eta_prime) - kDegenerateTol;
  const bool ok = dominates && completeness <= tol.completeness && povm_psd <= tol.povm_psd &&
                  tau_psd <= tol.tau_psd && tau_trace <= tol.tau_trace &&
                  slackness <= tol.slackness && m_invariance <= tol.M_invariance &&
                  p_consistency <= tol.p_consistency;
  cert.status = ok ? CertStatus::Certified : CertStatus::Rejected;
  return cert;
}

std::string certificate_report(const OptimalityCertificate& c) {
  std::ostringstream os;
  os.precision(12);
  os << "status: " << (c.certified() ? "Certified" : "Rejected");
  if (c.degenerate_first || c.degenerate_second) os << " (degenerate)";
  os << "\n";
  for (const auto& [k, v] : c.residuals) os << k << ": " << v << "\n";
  os << "alpha: " << c.alpha << "\n";
  os << "beta: " << c.beta << "\n";
  if (c.c) os << "c: " << *c.c << "\n";
  if (c.c_prime) os << "c_prime: " << *c.c_prime << "\n";
  return os.str();
}

}  // namespace medkit
