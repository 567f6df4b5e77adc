#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "medkit/io.hpp"
#include "helpers.hpp"

using namespace medkit;
using medkit::testing::bloch;

namespace {

const char* kZrotEnsemble = R"({
  "dim": 2,
  "eta": 0.25,
  "eta_prime": 0.25,
  "set1": {
    "seed": {"bloch": {"m": 1, "a": 1.0, "n": [1, 0, 0]}},
    "unitaries": {"zrot": [0.0, 3.141592653589793]}
  },
  "set2": {
    "seed": {"bloch": {"m": 1, "a": 1.0, "n": [0, 1, 0]}},
    "unitaries": {"zrot": [0.0, 3.141592653589793]}
  }
})";

}  // namespace

TEST_CASE("a z-rotation ensemble parses to the builder's result") {
  const TwoSetEnsemble e = parse_ensemble(kZrotEnsemble, "inline");
  const TwoSetEnsemble want = build_qubit_zrotation_ensemble(
      0.25, 0.25, bloch(1.0, {1.0, 0.0, 0.0}), bloch(1.0, {0.0, 1.0, 0.0}), {0.0, M_PI},
      {0.0, M_PI});
  CHECK(e.d == 2);
  CHECK(e.eta == 0.25);
  CHECK((e.rho1 - want.rho1).fnorm() < 1e-12);
  CHECK((e.rho1_prime - want.rho1_prime).fnorm() < 1e-12);
  REQUIRE(e.n() == 2);
  for (int j = 0; j < 2; ++j) CHECK((e.U[j] - want.U[j]).fnorm() < 1e-12);
}

TEST_CASE("matrix seeds accept [re, im] pairs and equal the bloch form") {
  const char* text = R"({
    "dim": 2, "eta": 0.5, "eta_prime": 0.5,
    "set1": {"seed": {"matrix": [[0.5, [0.0, -0.5]], [[0.0, 0.5], 0.5]]},
             "unitaries": {"zrot": [0.0]}},
    "set2": {"seed": {"bloch": {"m": 1, "a": 1.0, "n": [0, 1, 0]}},
             "unitaries": {"zrot": [0.0]}}
  })";
  const TwoSetEnsemble e = parse_ensemble(text, "inline");
  // (I + sigma_y)/2 written both ways
  CHECK((e.rho1 - e.rho1_prime).fnorm() < 1e-12);
}

TEST_CASE("spinor unitaries parse into the generalized rotation") {
  const char* text = R"({
    "dim": 2, "eta": 0.25, "eta_prime": 0.25,
    "set1": {"seed": {"bloch": {"m": 1, "a": 1.0, "n": [1, 0, 0]}},
             "unitaries": {"spinor": {"m": 1, "thetas": [
               [[0,0,0],[0,0,0],[0,0,0]],
               [[0,1.5707963267948966,0],[0,0,0],[0,0,0]]
             ]}}},
    "set2": {"seed": {"bloch": {"m": 1, "a": 1.0, "n": [0, 1, 0]}},
             "unitaries": {"zrot": [0.0, 3.141592653589793]}}
  })";
  const TwoSetEnsemble e = parse_ensemble(text, "inline");
  // theta_12 = pi/2 conjugates like a z rotation by pi
  const CMat probe = e.rho1;
  CHECK((conj_by(e.U[1], probe) - conj_by(zrotation(M_PI), probe)).fnorm() < 1e-10);
}

TEST_CASE("parse errors name the file and the offending field") {
  const auto message_of = [](const char* text) {
    try {
      parse_ensemble(text, "bad.json");
    } catch (const ParseError& ex) {
      return std::string(ex.what());
    }
    return std::string();
  };

  CHECK(message_of(R"({"eta": 0.5})").find("bad.json") != std::string::npos);
  CHECK(message_of(R"({"eta": 0.5})").find("dim") != std::string::npos);

  const std::string prior_msg = message_of(R"({
    "dim": 2, "eta": 0.5, "eta_prime": 0.1,
    "set1": {"seed": {"bloch": {"m": 1, "a": 1.0, "n": [1,0,0]}}, "unitaries": {"zrot": [0.0]}},
    "set2": {"seed": {"bloch": {"m": 1, "a": 1.0, "n": [0,1,0]}}, "unitaries": {"zrot": [0.0]}}
  })");
  CHECK(prior_msg.find("n*eta + n'*eta_prime = 1") != std::string::npos);

  const std::string unit_msg = message_of(R"({
    "dim": 2, "eta": 0.5, "eta_prime": 0.5,
    "set1": {"seed": {"bloch": {"m": 1, "a": 1.0, "n": [1,1,0]}}, "unitaries": {"zrot": [0.0]}},
    "set2": {"seed": {"bloch": {"m": 1, "a": 1.0, "n": [0,1,0]}}, "unitaries": {"zrot": [0.0]}}
  })");
  CHECK(unit_msg.find("unit vector") != std::string::npos);
  CHECK(unit_msg.find("set1.seed.bloch") != std::string::npos);

  const std::string first_msg = message_of(R"({
    "dim": 2, "eta": 0.5, "eta_prime": 0.5,
    "set1": {"seed": {"bloch": {"m": 1, "a": 1.0, "n": [1,0,0]}}, "unitaries": {"zrot": [0.5]}},
    "set2": {"seed": {"bloch": {"m": 1, "a": 1.0, "n": [0,1,0]}}, "unitaries": {"zrot": [0.0]}}
  })");
  CHECK(first_msg.find("identity") != std::string::npos);
}

TEST_CASE("POVM files roundtrip through JSON") {
  CMat p0(2), p1(2);
  p0(0, 0) = 1.0;
  p0(0, 1) = cplx(0.1, -0.2);
  p0(1, 0) = cplx(0.1, 0.2);
  p1 = CMat::identity(2) - p0;
  Povm p = Povm::from_elements({p0, p1}, 1);
  p.factorize();
  const Povm back = parse_povm(povm_to_json(p), "roundtrip");
  REQUIRE(back.elements.size() == 2);
  CHECK(back.n_first == 1);
  for (int k = 0; k < 2; ++k) CHECK((back.elements[k] - p.elements[k]).fnorm() < 1e-15);
  CHECK_FALSE(back.weights.empty());  // factorized on load
}

TEST_CASE("POVM parsing validates structure") {
  CHECK_THROWS_AS(parse_povm(R"({"elements": []})", "x"), ParseError);
  CHECK_THROWS_AS(parse_povm(R"({"n_first": 3, "elements": [[[1,0],[0,1]]]})", "x"), ParseError);
  CHECK_THROWS_AS(parse_povm(R"(not json)", "x"), ParseError);
}
