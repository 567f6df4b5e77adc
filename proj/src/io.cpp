#include "medkit/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace medkit {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& where,
                       const std::string& msg) {
  throw ParseError(origin + ": " + where + ": " + msg);
}

CMat parse_matrix(const json& j, int dim, const std::string& origin, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    fail(origin, where, "expected a " + std::to_string(dim) + "-row matrix");
  CMat m(dim);
  for (int r = 0; r < dim; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      fail(origin, where, "row " + std::to_string(r) + " must have " + std::to_string(dim) +
                              " entries");
    for (int c = 0; c < dim; ++c) {
      const json& cell = row[c];
      if (cell.is_number()) {
        m(r, c) = cell.get<double>();
      } else if (cell.is_array() && cell.size() == 2 && cell[0].is_number() &&
                 cell[1].is_number()) {
        m(r, c) = cplx(cell[0].get<double>(), cell[1].get<double>());
      } else {
        fail(origin, where, "entry (" + std::to_string(r) + "," + std::to_string(c) +
                                ") must be a number or [re, im] pair");
      }
    }
  }
  return m;
}

CMat parse_seed(const json& j, int dim, const std::string& origin, const std::string& where) {
  if (j.contains("matrix")) return parse_matrix(j["matrix"], dim, origin, where + ".matrix");
  if (j.contains("bloch")) {
    const json& b = j["bloch"];
    GeneralizedBlochState s;
    s.m = b.value("m", 1);
    if ((1 << s.m) != dim)
      fail(origin, where + ".bloch", "m = " + std::to_string(s.m) + " does not match dim " +
                                         std::to_string(dim));
    if (!b.contains("a") || !b.contains("n")) fail(origin, where + ".bloch", "needs a and n");
    s.a = b["a"].get<double>();
    s.n = b["n"].get<std::vector<double>>();
    if (static_cast<int>(s.n.size()) != 2 * s.m + 1)
      fail(origin, where + ".bloch", "n must have 2m+1 components");
    double norm = 0.0;
    for (double x : s.n) norm += x * x;
    norm = std::sqrt(norm);
    if (std::abs(norm - 1.0) > 1e-9)
      fail(origin, where + ".bloch", "n must be a unit vector (norm " + std::to_string(norm) +
                                         ")");
    return bloch_to_state(s, dirac_gammas(s.m));
  }
  fail(origin, where, "seed needs a \"matrix\" or \"bloch\" field");
}

std::vector<CMat> parse_unitaries(const json& j, int dim, const std::string& origin,
                                  const std::string& where) {
  std::vector<CMat> out;
  if (j.contains("zrot")) {
    if (dim != 2) fail(origin, where + ".zrot", "z-rotation lists need dim 2");
    for (double angle : j["zrot"].get<std::vector<double>>()) out.push_back(zrotation(angle));
  } else if (j.contains("matrices")) {
    int k = 0;
    for (const json& m : j["matrices"])
      out.push_back(parse_matrix(m, dim, origin, where + ".matrices[" + std::to_string(k++) +
                                                     "]"));
  } else if (j.contains("spinor")) {
    const json& sp = j["spinor"];
    const int m = sp.value("m", 0);
    if ((1 << m) != dim)
      fail(origin, where + ".spinor", "m does not match dim " + std::to_string(dim));
    const GammaSet g = dirac_gammas(m);
    int k = 0;
    for (const json& table : sp["thetas"]) {
      const auto t = table.get<std::vector<std::vector<double>>>();
      try {
        out.push_back(spinor_rotation(g, t));
      } catch (const std::exception& ex) {
        fail(origin, where + ".spinor.thetas[" + std::to_string(k) + "]", ex.what());
      }
      ++k;
    }
  } else {
    fail(origin, where, "unitaries need a \"zrot\", \"matrices\" or \"spinor\" field");
  }
  if (out.empty()) fail(origin, where, "at least one unitary required");
  if ((out.front() - CMat::identity(dim)).fnorm() > 1e-12)
    fail(origin, where, "first unitary must be the identity");
  return out;
}

json parse_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& ex) {
    throw ParseError(origin + ": " + ex.what());
  }
}

json matrix_to_json(const CMat& m) {
  json rows = json::array();
  for (int r = 0; r < m.dim(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.dim(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TwoSetEnsemble parse_ensemble(const std::string& text, const std::string& origin) {
  const json j = parse_text(text, origin);
  for (const char* key : {"dim", "eta", "eta_prime", "set1", "set2"})
    if (!j.contains(key)) fail(origin, "top level", std::string("missing field \"") + key + "\"");

  TwoSetEnsemble e;
  e.d = j["dim"].get<int>();
  if (e.d < 2 || e.d > 16) fail(origin, "dim", "dim must be in [2, 16]");
  e.eta = j["eta"].get<double>();
  e.eta_prime = j["eta_prime"].get<double>();

  const json& s1 = j["set1"];
  const json& s2 = j["set2"];
  for (const char* key : {"seed", "unitaries"}) {
    if (!s1.contains(key)) fail(origin, "set1", std::string("missing field \"") + key + "\"");
    if (!s2.contains(key)) fail(origin, "set2", std::string("missing field \"") + key + "\"");
  }
  e.rho1 = parse_seed(s1["seed"], e.d, origin, "set1.seed");
  e.rho1_prime = parse_seed(s2["seed"], e.d, origin, "set2.seed");
  e.U = parse_unitaries(s1["unitaries"], e.d, origin, "set1.unitaries");
  e.U_prime = parse_unitaries(s2["unitaries"], e.d, origin, "set2.unitaries");

  const double total = e.n() * e.eta + e.n_prime() * e.eta_prime;
  if (std::abs(total - 1.0) > 1e-12)
    fail(origin, "eta/eta_prime",
         "priors must satisfy n*eta + n'*eta_prime = 1 (got " + std::to_string(total) + ")");
  try {
    e.validate();
  } catch (const std::exception& ex) {
    fail(origin, "ensemble", ex.what());
  }
  return e;
}

TwoSetEnsemble load_ensemble(const std::string& path) {
  return parse_ensemble(slurp(path), path);
}

Povm parse_povm(const std::string& text, const std::string& origin) {
  const json j = parse_text(text, origin);
  if (!j.contains("elements") || !j["elements"].is_array() || j["elements"].empty())
    fail(origin, "top level", "missing non-empty \"elements\" array");
  const json& first = j["elements"][0];
  if (!first.is_array() || first.empty()) fail(origin, "elements[0]", "not a matrix");
  const int dim = static_cast<int>(first.size());
  Povm p;
  int k = 0;
  for (const json& m : j["elements"])
    p.elements.push_back(parse_matrix(m, dim, origin, "elements[" + std::to_string(k++) + "]"));
  p.n_first = j.value("n_first", 0);
  if (p.n_first < 0 || p.n_first > static_cast<int>(p.elements.size()))
    fail(origin, "n_first", "must be between 0 and the number of elements");
  p.factorize();
  return p;
}

Povm load_povm(const std::string& path) { return parse_povm(slurp(path), path); }

std::string povm_to_json(const Povm& p) {
  json j;
  j["n_first"] = p.n_first;
  j["elements"] = json::array();
  for (const auto& el : p.elements) j["elements"].push_back(matrix_to_json(el));
  return j.dump(2);
}

}  // namespace medkit
