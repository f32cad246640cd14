#ifndef GREENLAB_ZOO_HPP
#define GREENLAB_ZOO_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "greenlab/endomorphism.hpp"

namespace greenlab {

struct Expected {
  std::optional<std::vector<double>> lambdas;
  std::optional<double> dimension;
  bool lattes = false;
  std::string notes;
  /// How the entry was built, e.g. {"kind": "lattes_doubling", "g2": [re, im], ...};
  /// lets the constructor oracles be rerun from files.
  nlohmann::json construction;
};

struct ZooEntry {
  HomogeneousMap map;
  Expected expected;
};

/// [z_0^d : ... : z_k^d]; lambda_i = log d, dimension k.
ZooEntry power_map(int d, int k);

/// Homogenized T_d with T_d(w + 1/w) = w^d + w^{-d} (T_2 = z^2 - 2),
/// via P_{n+1} = z P_n - w^2 P_{n-1}; lambda = log d, dimension 1.
ZooEntry chebyshev(int d);

/// x(2P) as a function of x(P) on y^2 = 4x^3 - g2 x - g3:
/// [x^4 + (g2/2) x^2 w^2 + 2 g3 x w^3 + (g2^2/16) w^4 : 4 x^3 w - g2 x w^3 - g3 w^4].
/// The constructor checks the formula against the chord-tangent group law
/// (residual < 1e-9 on 500 curve points). Throws DomainError for a singular curve.
ZooEntry lattes_p1_doubling(Complex g2, Complex g3);

/// Largest chordal distance between R(x(P)) and x(2P), with 2P from the
/// tangent construction, over n_points random curve points.
double doubling_commutation_residual(const HomogeneousMap& r, Complex g2, Complex g3, int n_points,
                                     std::uint64_t seed);

/// Symmetric square of a P^1 map acting on P^2 = Sym^2 P^1 through
/// pi([a:b], [c:d]) = [ac : ad+bc : bd]. Coefficients come from a least-squares
/// fit of pi(g(p), g(q)) against the degree-d monomials in pi(p, q); a fit
/// residual above 1e-8 throws NumericError.
ZooEntry ueda_sym2(const ZooEntry& g);

/// max |pi(g(p), g(q)) - f(pi(p, q))| over n_pairs random pairs, both sides
/// normalized and phase-aligned.
double sym2_semiconjugacy_residual(const HomogeneousMap& f, const HomogeneousMap& g, int n_pairs,
                                   std::uint64_t seed);

/// max |T(w + 1/w) - (w^d + w^{-d})| over n_points unit-modulus w.
double chebyshev_semiconjugacy_residual(const HomogeneousMap& f, int n_points, std::uint64_t seed);

/// Constructor oracle residual recorded for the entry (NaN when it has none).
double constructor_residual(const ZooEntry& entry, int n_points, std::uint64_t seed);

/// [z^2 + 0.1 w^2 : w^2]: connected Julia set, lambda = log 2, not Lattes.
ZooEntry perturbed_power_map();

/// The default zoo: power maps (d = 2, 3 on P^1; d = 2 on P^2), Chebyshev
/// d = 2, 3, the lemniscatic doubling Lattes map, its symmetric square, the
/// symmetric square of z^3 and the perturbed power map.
std::vector<ZooEntry> default_zoo();

/// Zoo entry by label; throws ConfigError when unknown.
ZooEntry zoo_entry(const std::string& label);

nlohmann::ordered_json expected_to_json(const Expected& e);
Expected expected_from_json(const nlohmann::json& j);

/// Writes dir/<label>/map.json and dir/<label>/expected.json.
void save_zoo_entry(const ZooEntry& entry, const std::string& dir);
ZooEntry load_zoo_entry(const std::string& entry_dir);

}  // namespace greenlab

#endif  // GREENLAB_ZOO_HPP
