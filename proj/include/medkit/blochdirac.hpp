#ifndef MEDKIT_BLOCHDIRAC_HPP
#define MEDKIT_BLOCHDIRAC_HPP

#include "medkit/cmat.hpp"

namespace medkit {

struct DimensionTooLarge : std::runtime_error {
  explicit DimensionTooLarge(const std::string& msg) : std::runtime_error(msg) {}
};
struct OutsideFamily : std::runtime_error {
  explicit OutsideFamily(const std::string& msg) : std::runtime_error(msg) {}
};
struct ZeroRadius : std::runtime_error {
  explicit ZeroRadius(const std::string& msg) : std::runtime_error(msg) {}
};

// 2m+1 mutually anticommuting Hermitian traceless matrices in dimension 2^m,
// {g_i, g_j} = 2 delta_ij I. Built recursively from the Pauli triple.
struct GammaSet {
  int m = 0;
  std::vector<CMat> gammas;  // size 2m+1, each 2^m x 2^m
  int dim() const { return 1 << m; }
};

// rho = (I + a n.gamma) / 2^m
struct GeneralizedBlochState {
  int m = 1;
  double a = 0.0;            // radius in [0,1]
  std::vector<double> n;     // unit direction, length 2m+1
};

GammaSet dirac_gammas(int m);  // 1 <= m <= 4

CMat bloch_to_state(const GeneralizedBlochState& s, const GammaSet& g);
GeneralizedBlochState state_to_bloch(const CMat& rho, const GammaSet& g);

// Projectors (I +- n.gamma)/2 onto the two degenerate eigenspaces.
std::pair<CMat, CMat> spectral_split(const GeneralizedBlochState& s, const GammaSet& g);

// n.gamma for a real direction vector (not necessarily unit)
CMat dot_gamma(const std::vector<double>& n, const GammaSet& g);

}  // namespace medkit

#endif
