#include "medkit/simulate.hpp"

#include <cmath>

namespace medkit {

int sample_outcome(const CMat& rho, const Povm& p, Xoshiro256ss& rng) {
  const int count = static_cast<int>(p.elements.size());
  if (count == 0) throw InvalidDistribution("sample_outcome: empty POVM");
  std::vector<double> probs(count, 0.0);
  double total = 0.0;
  for (int i = 0; i < count; ++i) {
    double pr = trace_re(p.elements[i], rho);
    if (pr < -1e-10)
      throw InvalidDistribution("sample_outcome: negative Born probability " +
                                std::to_string(pr));
    pr = std::max(0.0, pr);
    probs[i] = pr;
    total += pr;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw InvalidDistribution("sample_outcome: probabilities sum to " + std::to_string(total));
  const double u = rng.next_double() * total;
  double acc = 0.0;
  for (int i = 0; i < count; ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  return count - 1;  // u landed on the rounding tail
}

SimResult monte_carlo_success(const TwoSetEnsemble& e, const Povm& p, long long trials,
                              uint64_t seed) {
  e.validate();
  if (trials < 1) throw std::invalid_argument("monte_carlo_success: trials >= 1");
  if (static_cast<int>(p.elements.size()) != e.total() || p.n_first != e.n())
    throw DimensionMismatch("monte_carlo_success: POVM length must be n + n'");
  const auto states = all_states(e);
  Xoshiro256ss rng(seed);

  // cumulative priors over the flat state list
  std::vector<double> cum(e.total(), 0.0);
  double acc = 0.0;
  for (int k = 0; k < e.total(); ++k) {
    acc += e.prior(k);
    cum[k] = acc;
  }

  SimResult res;
  res.trials = trials;
  res.seed = seed;
  for (long long t = 0; t < trials; ++t) {
    const double u = rng.next_double() * acc;
    int sent = e.total() - 1;
    for (int k = 0; k < e.total(); ++k)
      if (u < cum[k]) {
        sent = k;
        break;
      }
    if (sample_outcome(states[sent], p, rng) == sent) ++res.successes;
  }
  res.p_hat = static_cast<double>(res.successes) / static_cast<double>(res.trials);
  res.stderr_hat = std::sqrt(res.p_hat * (1.0 - res.p_hat) / static_cast<double>(res.trials));
  return res;
}

}  // namespace medkit
