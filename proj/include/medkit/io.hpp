#ifndef MEDKIT_IO_HPP
#define MEDKIT_IO_HPP

#include <string>

#include "medkit/ensembles.hpp"
#include "medkit/povm.hpp"

namespace medkit {

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// JSON ensemble file, schema documented in docs/formats.md:
//   dim, eta, eta_prime, set1/set2 each with a seed (explicit complex matrix
//   or Bloch form) and unitaries (zrot angle list, explicit matrices, or
//   spinor theta tables). Rejects priors violating n*eta + n'*eta' = 1.
TwoSetEnsemble load_ensemble(const std::string& path);
TwoSetEnsemble parse_ensemble(const std::string& text, const std::string& origin);

// JSON POVM file: {"n_first": k, "elements": [matrix, ...]}.
Povm load_povm(const std::string& path);
Povm parse_povm(const std::string& text, const std::string& origin);

std::string povm_to_json(const Povm& p);

}  // namespace medkit

#endif
