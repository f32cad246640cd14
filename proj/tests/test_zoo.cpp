#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "greenlab/map_io.hpp"
#include "greenlab/zoo.hpp"
#include "helpers.hpp"

using namespace greenlab;
using testing::affine;
using testing::point;

namespace {

// Affine value of a P^1 map at z, treating [z : 1].
Complex apply(const HomogeneousMap& f, Complex z) {
  LiftVector v(2);
  v << z, 1.0;
  const LiftVector w = f.lift(v);
  return w[0] / w[1];
}

// Chordal distance on the Riemann sphere.
double chordal(Complex a, Complex b) {
  return 2.0 * std::abs(a - b) / std::sqrt((1.0 + std::norm(a)) * (1.0 + std::norm(b)));
}

}  // namespace

TEST_CASE("lattes doubling agrees with the chord-tangent law") {
  const Complex g2 = 4.0, g3 = 0.0;
  const auto e = lattes_p1_doubling(g2, g3);
  CHECK(e.map.degree() == 4);
  CHECK(e.expected.lattes);
  Rng rng(101);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const Complex x(2.0 * standard_normal(rng), 2.0 * standard_normal(rng));
    const Complex y = std::sqrt(4.0 * x * x * x - g2 * x - g3);
    if (std::abs(y) < 1e-6) continue;
    // Tangent at P = (x, y) of y^2 = 4x^3 - g2 x - g3; third intersection -2P.
    const Complex m = (12.0 * x * x - g2) / (2.0 * y);
    const Complex x2 = m * m / 4.0 - 2.0 * x;
    worst = std::max(worst, chordal(apply(e.map, x), x2));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("lemniscatic doubling is (x^2 + 1)^2 / (4x (x^2 - 1))") {
  const auto e = lattes_p1_doubling(4.0, 0.0);
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const Complex x = complex_normal(rng);
    const Complex candidate = (x * x + 1.0) * (x * x + 1.0) / (4.0 * x * (x * x - 1.0));
    CHECK(chordal(apply(e.map, x), candidate) < 1e-12);
  }
}

TEST_CASE("a second curve also passes the oracle") {
  const auto e = lattes_p1_doubling(Complex(1.0, 0.5), Complex(-0.3, 0.2));
  CHECK(doubling_commutation_residual(e.map, Complex(1.0, 0.5), Complex(-0.3, 0.2), 500, 3) < 1e-9);
}

TEST_CASE("singular curves are rejected") {
  // g2^3 = 27 g3^2: g2 = 3, g3 = 1.
  CHECK_THROWS_AS(lattes_p1_doubling(3.0, 1.0), DomainError);
  CHECK_THROWS_AS(lattes_p1_doubling(0.0, 0.0), DomainError);
}

TEST_CASE("chebyshev semiconjugacy w + 1/w") {
  for (int d : {2, 3, 4, 5}) {
    const auto e = chebyshev(d);
    Rng rng(d);
    for (int i = 0; i < 100; ++i) {
      const Complex w = std::polar(1.0, 2 * M_PI * uniform_real(rng));
      const Complex lhs = apply(e.map, w + 1.0 / w);
      const Complex rhs = std::pow(w, d) + std::pow(w, -d);
      CHECK(std::abs(lhs - rhs) < 1e-10);
    }
  }
  // z^2 - 2 and z^3 - 3z.
  CHECK(std::abs(apply(chebyshev(2).map, 0.7) - (0.49 - 2.0)) < 1e-15);
  CHECK(std::abs(apply(chebyshev(3).map, 0.7) - (0.343 - 2.1)) < 1e-15);
  CHECK(chebyshev_semiconjugacy_residual(chebyshev(3).map, 100, 1) < 1e-10);
}

TEST_CASE("symmetric squares are semiconjugate to the pair map") {
  for (const char* base : {"power_d2_k1", "lattes_doubling_g2_4_g3_0", "chebyshev_d2"}) {
    const auto g = zoo_entry(base);
    const auto f = ueda_sym2(g);
    CHECK(f.map.dim() == 2);
    CHECK(f.map.degree() == g.map.degree());
    Rng rng(8);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
      const Complex p = complex_normal(rng), q = complex_normal(rng);
      // pi([p : 1], [q : 1]) = [pq : p + q : 1].
      const ProjPoint lhs = point({apply(g.map, p) * apply(g.map, q), apply(g.map, p) + apply(g.map, q), 1.0});
      const ProjPoint rhs = eval(f.map, point({p * q, p + q, 1.0}));
      worst = std::max(worst, fs_distance(lhs, rhs));
    }
    CHECK_MESSAGE(worst < 1e-9, base);
    CHECK(sym2_semiconjugacy_residual(f.map, g.map, 500, 2) < 1e-9);
  }
}

TEST_CASE("sym2 of z^2 has the expected coefficients") {
  // [ac : ad+bc : bd] -> [a^2 c^2 : a^2 d^2 + b^2 c^2 : b^2 d^2] = [z0^2 : z1^2 - 2 z0 z2 : z2^2].
  const auto f = ueda_sym2(power_map(2, 1)).map;
  const auto& c = f.components();
  CHECK(std::abs(c[0].coefficient({2, 0, 0}) - 1.0) < 1e-12);
  CHECK(std::abs(c[1].coefficient({0, 2, 0}) - 1.0) < 1e-12);
  CHECK(std::abs(c[1].coefficient({1, 0, 1}) + 2.0) < 1e-12);
  CHECK(std::abs(c[2].coefficient({0, 0, 2}) - 1.0) < 1e-12);
  CHECK(std::abs(c[0].coefficient({1, 0, 1})) == 0.0);
}

TEST_CASE("sym2 preimages come in d^2 ordered pairs") {
  const auto f = zoo_entry("sym2_lattes_doubling_g2_4_g3_0").map;
  CHECK(f.solver() == PreimageSolver::sym2);
  const ProjPoint y = point({0.3, Complex(1.0, 0.2), 1.0});
  CHECK(preimages(f, y).size() == 16);
}

TEST_CASE("sym2 requires a P^1 map") {
  CHECK_THROWS(ueda_sym2(power_map(2, 2)));
}

TEST_CASE("expected values") {
  for (const auto& e : default_zoo()) {
    CHECK_NOTHROW(e.map.validate());
    if (e.expected.lattes) {
      REQUIRE(e.expected.lambdas);
      for (double l : *e.expected.lambdas) CHECK(l == doctest::Approx(0.5 * std::log(e.map.degree())));
    }
    const double r = constructor_residual(e, 200, 1);
    if (!std::isnan(r)) CHECK_MESSAGE(r < 1e-9, e.map.label());
  }
  CHECK(power_map(3, 1).expected.lambdas->at(0) == doctest::Approx(std::log(3.0)));
  CHECK_FALSE(perturbed_power_map().expected.lattes);
  CHECK_THROWS_AS(zoo_entry("no_such_map"), ConfigError);
  CHECK_THROWS_AS(power_map(1, 1), DomainError);
  CHECK_THROWS_AS(power_map(2, 3), DomainError);
}

TEST_CASE("zoo entries round-trip through files") {
  const auto dir = std::filesystem::temp_directory_path() / "greenlab_zoo_test";
  std::filesystem::remove_all(dir);
  for (const auto& e : default_zoo()) {
    save_zoo_entry(e, dir.string());
    const auto back = load_zoo_entry((dir / e.map.label()).string());
    CHECK(back.map.label() == e.map.label());
    CHECK(back.map.solver() == e.map.solver());
    CHECK(back.expected.lattes == e.expected.lattes);
    CHECK(expected_to_json(back.expected) == expected_to_json(e.expected));
    CHECK(map_to_json(back.map) == map_to_json(e.map));
    const ProjPoint x = quasi_random_point(e.map.dim(), 7);
    CHECK(eval(back.map, x).coords() == eval(e.map, x).coords());
    const double r = constructor_residual(back, 100, 1);
    CHECK(std::isnan(r) == std::isnan(constructor_residual(e, 100, 1)));
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("map json validation") {
  nlohmann::json bad = map_to_json(power_map(2, 1).map);
  bad["components"][0][0]["exponents"] = {3, 0};
  CHECK_THROWS_AS(map_from_json(bad), ConfigError);
  nlohmann::json missing = map_to_json(power_map(2, 1).map);
  missing.erase("d");
  CHECK_THROWS_AS(map_from_json(missing), ConfigError);
}
