#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "greenlab/linearization.hpp"
#include "greenlab/zoo.hpp"
#include "helpers.hpp"

using namespace greenlab;
using testing::point;

namespace {

// Orbit of length n along the invariant circle of z^2, starting at angle t.
Orbit circle_orbit(double t, int n) { return forward_orbit(power_map(2, 1).map, point({std::polar(1.0, t), 1.0}), n); }

}  // namespace

TEST_CASE("ball grids are deterministic, nested by rescaling and inside the ball") {
  for (int k = 1; k <= 2; ++k) {
    const auto g = ball_grid(k, 0.2, 200, true);
    const auto h = ball_grid(k, 0.1, 200, true);
    REQUIRE(g.size() == 200);
    CHECK(g[0].norm() == 0.0);
    double largest = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(g[i].norm() <= 0.2 + 1e-15);
      CHECK((g[i] * 0.5 - h[i]).norm() < 1e-16);
      largest = std::max(largest, g[i].norm());
    }
    CHECK(largest > 0.18);
  }
}

TEST_CASE("n = 0 memberships are trivial") {
  const auto f = zoo_entry("lattes_doubling_g2_4_g3_0").map;
  const auto s = sample_measure(f, 10, 30, 1);
  for (const auto& x : s.points) {
    const Orbit o{{x}};
    const Cocycle c = identity_cocycle(x);
    for (double rho : {0.3, 0.2, 0.05}) {
      const auto r = membership(f, o, c, rho, 1.0, 0.99);
      CHECK(r.in_B);
      CHECK(r.in_LB);
      CHECK(r.in_V);
    }
  }
}

TEST_CASE("square map: LB equals B and V follows the Jacobian drift") {
  const auto f = power_map(2, 1).map;
  for (double t : {0.3, 1.7, 4.0}) {
    const Orbit o = circle_orbit(t, 12);
    const auto pre = cocycle_prefixes(f, o);
    for (int n = 0; n <= 12; ++n) {
      for (double tau : {1.0, 2.0, 10.0}) CHECK(lb_condition(pre[n], 2, tau));
      for (double nu : {0.5, 0.3, 0.1}) {
        const bool expect = n * std::log(2.0) <= 2.0 * std::log(1.0 / nu) + 1e-12;
        CHECK(v_condition(pre[n], 2, nu) == expect);
      }
      const auto r = membership(f, o, pre[n], 0.05, 2.0, 0.3);
      CHECK(r.in_LB == r.in_B);
      CHECK(r.log_jac_ratio == doctest::Approx(n * std::log(2.0)).epsilon(1e-9));
    }
  }
}

TEST_CASE("a point next to the critical point is not in B") {
  const auto f = power_map(2, 1).map;
  const Orbit o = forward_orbit(f, point({1e-3, 1.0}), 1);
  const Cocycle c = cocycle_along(f, o);
  const BallImage im = b_membership(f, o, c, 0.05);
  CHECK_FALSE(im.in_B);
  CHECK_FALSE(membership(f, o, c, 0.05, 10.0, 0.3).in_LB);
}

TEST_CASE("distortion is exactly 1 on P^1") {
  const auto f = zoo_entry("lattes_doubling_g2_4_g3_0").map;
  const auto s = sample_measure(f, 100, 30, 2);
  const auto p = distortion_profile(f, s, 8, 0.05, 10.0, 0.3, 5);
  for (const auto& e : p.entries) CHECK(e.condition == 1.0);
  CHECK(p.violations == 0);
}

TEST_CASE("sym2 of z^3: distortion stays bounded while the V mass decays") {
  const auto f = zoo_entry("sym2_power_d3_k1").map;
  const auto s = sample_measure(f, 200, 30, 2);
  auto median = [](const DistortionProfile& p) {
    std::vector<double> c;
    for (const auto& e : p.entries) c.push_back(e.condition);
    std::nth_element(c.begin(), c.begin() + c.size() / 2, c.end());
    return c[c.size() / 2];
  };
  // Only the conformal factor grows (3^n); the condition number is set by
  // the factor points and does not drift with n.
  const double m2 = median(distortion_profile(f, s, 2, 0.05, 10.0, 0.3, 5));
  const auto p = distortion_profile(f, s, 8, 0.05, 10.0, 0.3, 5);
  CHECK(median(p) < 5.0);
  CHECK(median(p) < 2.0 * m2);
  int in_v = 0;
  for (const auto& e : p.entries) in_v += e.in_V ? 1 : 0;
  CHECK(in_v == 0);
}

TEST_CASE("mass curves of z^2 and z^3") {
  for (int d : {2, 3}) {
    const auto f = power_map(d, 1).map;
    const auto s = sample_measure(f, 200, 30, 3);
    MassCurveOptions o;
    o.n_max = 8;
    o.seed = 9;
    const auto mc = mass_curves(f, s, o);
    CHECK(mc.curves.size() == 36);
    CHECK(mc.inclusions.evaluated == 200 * 9);
    CHECK(mc.inclusions.lb_not_in_b == 0);
    CHECK(mc.inclusions.rho_monotonicity == 0);
    CHECK(mc.inclusions.tau_monotonicity == 0);
    CHECK(mc.inclusions.nu_monotonicity == 0);
    for (const auto& m : mc.curves) {
      for (const auto& row : m.rows) {
        CHECK(row.b.mass == 1.0);
        CHECK(row.lb.mass == 1.0);
        const bool expect = row.n * std::log(static_cast<double>(d)) <= 2.0 * std::log(1.0 / m.nu) + 1e-12;
        CHECK(row.v.mass == (expect ? 1.0 : 0.0));
      }
      if (m.nu == 0.3) CHECK(m.rows.back().v.mass < 0.05);
    }
  }
}

TEST_CASE("mass curves need 100 points") {
  const auto f = power_map(2, 1).map;
  const auto s = sample_measure(f, 99, 30, 3);
  CHECK_THROWS(mass_curves(f, s, {}));
}

TEST_CASE("lattes masses stay bounded below") {
  const auto f = zoo_entry("lattes_doubling_g2_4_g3_0").map;
  const auto s = sample_measure(f, 300, 30, 4);
  MassCurveOptions o;
  o.rhos = {0.05};
  o.taus = {10.0};
  o.nus = {0.3};
  o.seed = 10;
  const auto mc = mass_curves(f, s, o);
  REQUIRE(mc.curves.size() == 1);
  double min_lb = 1.0, min_v = 1.0;
  for (const auto& row : mc.curves[0].rows) {
    min_lb = std::min(min_lb, row.lb.mass);
    min_v = std::min(min_v, row.v.mass);
    CHECK(row.lb.mass <= row.b.mass);
    if (row.n == 8) CHECK(row.b.mass >= 0.9);
  }
  CHECK(min_lb > 0.5);
  CHECK(min_v > 0.3);
}

TEST_CASE("mass curve csv") {
  MassCurve m;
  m.rho = 0.1;
  m.tau = 2;
  m.nu = 0.5;
  m.rows.push_back({0, {1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}});
  m.rows.push_back({1, {0.5, 0.1}, {0.25, 0.05}, {0.75, 0.02}});
  std::ostringstream os;
  write_mass_curve_csv(os, m, "note");
  const std::string out = os.str();
  CHECK(out.find("n,mass_B,se_B,mass_LB,se_LB,mass_V,se_V\n") != std::string::npos);
  CHECK(out.find("# note\n") != std::string::npos);
  CHECK(out.find("\n1,0.5,") != std::string::npos);
}

TEST_CASE("sqrt(d) test: trivial and diverging cases") {
  const auto f = power_map(2, 1).map;
  const ProjPoint x = point({std::polar(1.0, 1.1), 1.0});
  const auto none = sqrt_d_linearization_test(f, x, 0, 0.05, 1.0);
  CHECK(none.verdict == TraceVerdict::inconclusive);
  CHECK_FALSE(none.reason.empty());

  const auto s = sample_measure(f, 10, 30, 6);
  int diverging = 0;
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    Rng rng(derive_seed(12, i));
    const Orbit o = extension_orbit(f, s.points[i], 400, rng);
    const auto t = sqrt_d_linearization_test(f, o, 400, 0.05, 1.0);
    diverging += t.verdict == TraceVerdict::diverging ? 1 : 0;
  }
  CHECK(diverging == 10);
}

TEST_CASE("trace json fields") {
  RenormalizationTrace t;
  t.point = point({1.0, 2.0});
  t.subsequence = {3, 7};
  t.sup_deviation = {0.5};
  t.verdict = TraceVerdict::converging;
  const auto j = trace_json(t);
  CHECK(j["verdict"] == "converging");
  CHECK(j["subsequence"].size() == 2);
  CHECK(j["point"].size() == 2);
  CHECK(to_string(TraceVerdict::diverging) == "diverging");
  CHECK(to_string(TraceVerdict::inconclusive) == "inconclusive");
}
