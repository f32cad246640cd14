#include <doctest.h>

#include <cmath>

#include "greenlab/projective.hpp"
#include "greenlab/random.hpp"
#include "helpers.hpp"

using namespace greenlab;
using testing::point;

namespace {

ProjPoint random_point(Rng& rng, int k) {
  LiftVector v(k + 1);
  for (int i = 0; i <= k; ++i) v[i] = complex_normal(rng);
  return normalize<double>(v);
}

}  // namespace

TEST_CASE("normalize rejects the zero vector") {
  CHECK_THROWS_AS(normalize<double>(LiftVector::Zero(2)), DomainError);
}

TEST_CASE("fs distance between the poles of P^1 is pi/2") {
  CHECK(fs_distance(point({1.0, 0.0}), point({0.0, 1.0})) == doctest::Approx(M_PI / 2).epsilon(1e-15));
  CHECK(fs_distance(point({1.0, 1.0}), point({1.0, 1.0})) == 0.0);
}

TEST_CASE("fs distance is a phase-invariant metric") {
  Rng rng(11);
  for (int k = 1; k <= 2; ++k) {
    for (int t = 0; t < 200; ++t) {
      const ProjPoint a = random_point(rng, k), b = random_point(rng, k), c = random_point(rng, k);
      const double ab = fs_distance(a, b);
      CHECK(ab >= 0.0);
      CHECK(ab <= M_PI / 2 + 1e-15);
      CHECK(ab == doctest::Approx(fs_distance(b, a)).epsilon(1e-14));
      CHECK(fs_distance(a, c) <= ab + fs_distance(b, c) + 1e-12);
      const Complex phase = std::polar(1.0, 2 * M_PI * uniform_real(rng));
      const ProjPoint a2 = ProjPoint::from_unit(a.coords() * phase);
      CHECK(fs_distance(a2, b) == doctest::Approx(ab).epsilon(1e-12));
      CHECK(same_point(a, a2));
    }
  }
}

TEST_CASE("fs distance stays accurate for nearby points") {
  // arccos would lose half the digits here.
  const double eps = 1e-9;
  const ProjPoint a = point({1.0, 0.0});
  const ProjPoint b = point({1.0, eps});
  CHECK(fs_distance(a, b) == doctest::Approx(std::atan(eps)).epsilon(1e-6));
}

TEST_CASE("chart inverse undoes chart apply") {
  Rng rng(5);
  for (int k = 1; k <= 2; ++k) {
    for (int t = 0; t < 100; ++t) {
      const Chart c = chart_at(random_point(rng, k));
      CHECK((c.frame.adjoint() * c.frame - FrameMatrix::Identity(k, k)).norm() < 1e-14);
      CHECK((c.frame.adjoint() * c.center.coords()).norm() < 1e-14);
      ChartVector u(k);
      for (int i = 0; i < k; ++i) u[i] = 0.3 * complex_normal(rng);
      const auto back = chart_inverse(c, chart_apply(c, u));
      REQUIRE(back.has_value());
      CHECK((*back - u).norm() < 1e-13);
    }
  }
}

TEST_CASE("chart distance from the centre matches atan of the chart radius") {
  const Chart c = chart_at(point({0.6, Complex(0.0, 0.8)}));
  ChartVector u(1);
  u[0] = Complex(0.2, -0.1);
  CHECK(fs_distance(c.center, chart_apply(c, u)) == doctest::Approx(std::atan(u.norm())).epsilon(1e-14));
}

TEST_CASE("quasi random points are unit and deterministic") {
  for (int k = 1; k <= 2; ++k) {
    for (std::uint64_t i = 1; i < 50; ++i) {
      const ProjPoint p = quasi_random_point(k, i);
      CHECK(p.dim() == k);
      CHECK(p.coords().norm() == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(p.coords() == quasi_random_point(k, i).coords());
    }
  }
}
