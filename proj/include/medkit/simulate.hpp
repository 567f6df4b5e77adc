#ifndef MEDKIT_SIMULATE_HPP
#define MEDKIT_SIMULATE_HPP

#include "medkit/ensembles.hpp"
#include "medkit/povm.hpp"
#include "medkit/rng.hpp"

namespace medkit {

struct InvalidDistribution : std::runtime_error {
  explicit InvalidDistribution(const std::string& msg) : std::runtime_error(msg) {}
};

struct SimResult {
  long long trials = 0;
  long long successes = 0;
  double p_hat = 0.0;
  double stderr_hat = 0.0;  // sqrt(p_hat (1 - p_hat) / trials)
  uint64_t seed = 0;
};

// Born-rule sample: outcome i with probability Tr(Pi_i rho). Probabilities
// below -1e-10 or a total off 1 by more than 1e-9 raise InvalidDistribution;
// smaller deviations are clamped/renormalized.
int sample_outcome(const CMat& rho, const Povm& p, Xoshiro256ss& rng);

// Sample a state by prior, measure, count label matches.
SimResult monte_carlo_success(const TwoSetEnsemble& e, const Povm& p, long long trials,
                              uint64_t seed);

}  // namespace medkit

#endif
