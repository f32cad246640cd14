#include "greenlab/map_io.hpp"

#include <fstream>
#include <memory>

namespace greenlab {

HomogeneousMap map_from_json(const nlohmann::json& j) {
  try {
    const int k = j.at("k").get<int>();
    const int d = j.at("d").get<int>();
    const std::string label = j.at("label").get<std::string>();
    if (k < 1 || k > kMaxDim) throw ConfigError("map: k must be 1 or 2");
    if (d < 2 || d > 15) throw ConfigError("map: d must lie in [2, 15]");
    const auto& comps = j.at("components");
    if (!comps.is_array() || static_cast<int>(comps.size()) != k + 1) {
      throw ConfigError("map: expected k+1 components");
    }
    std::vector<HomogeneousPolynomial> polys;
    for (const auto& comp : comps) {
      HomogeneousPolynomial p(k + 1, d);
      for (const auto& term : comp) {
        const auto e = term.at("exponents").get<std::vector<int>>();
        if (static_cast<int>(e.size()) != k + 1) throw ConfigError("map: exponent vector needs k+1 entries");
        Exponents ex{};
        int total = 0;
        for (int i = 0; i <= k; ++i) {
          if (e[i] < 0) throw ConfigError("map: negative exponent");
          ex[i] = e[i];
          total += e[i];
        }
        if (total != d) throw ConfigError("map: exponents of a term must sum to d");
        p.coefficient(ex) += Complex(term.value("re", 0.0), term.value("im", 0.0));
      }
      polys.push_back(std::move(p));
    }
    HomogeneousMap f(k, d, std::move(polys), label);
    f.validate();
    if (j.contains("solver")) {
      const auto& s = j.at("solver");
      if (s.is_string()) {
        const std::string name = s.get<std::string>();
        if (name == "diagonal_power") f.attach_diagonal_power_solver();
        else if (name != "binary_form" && name != "none") throw ConfigError("map: unknown solver '" + name + "'");
      } else if (s.is_object() && s.contains("sym2")) {
        f.attach_sym2_solver(std::make_shared<const HomogeneousMap>(map_from_json(s.at("sym2"))));
      } else {
        throw ConfigError("map: malformed solver field");
      }
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("map: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("map: ") + e.what());
  }
}

nlohmann::ordered_json map_to_json(const HomogeneousMap& f) {
  nlohmann::ordered_json j;
  j["k"] = f.dim();
  j["d"] = f.degree();
  j["label"] = f.label();
  nlohmann::ordered_json comps = nlohmann::ordered_json::array();
  for (const auto& p : f.components()) {
    nlohmann::ordered_json terms = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < p.coefficients().size(); ++i) {
      const Complex c = p.coefficients()[i];
      if (c == Complex(0.0)) continue;
      std::vector<int> e(p.exponents()[i].begin(), p.exponents()[i].begin() + f.dim() + 1);
      terms.push_back({{"exponents", e}, {"re", c.real()}, {"im", c.imag()}});
    }
    comps.push_back(terms);
  }
  j["components"] = comps;
  switch (f.solver()) {
    case PreimageSolver::binary_form: j["solver"] = "binary_form"; break;
    case PreimageSolver::diagonal_power: j["solver"] = "diagonal_power"; break;
    case PreimageSolver::sym2: j["solver"] = {{"sym2", map_to_json(*f.sym2_factor())}}; break;
    case PreimageSolver::none: break;
  }
  return j;
}

HomogeneousMap load_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open map file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("map file '" + path + "': " + e.what());
  }
  return map_from_json(j);
}

void save_map(const HomogeneousMap& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write map file '" + path + "'");
  out << map_to_json(f).dump(2) << "\n";
}

}  // namespace greenlab
