#include "greenlab/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>

#include <Eigen/QR>

#include "greenlab/map_io.hpp"

namespace greenlab {

namespace {

// Binary form sum_i h[i] x^i w^(d-i) as a component in two variables.
HomogeneousPolynomial binary_polynomial(const std::vector<Complex>& h) {
  const int d = static_cast<int>(h.size()) - 1;
  HomogeneousPolynomial p(2, d);
  for (int i = 0; i <= d; ++i) p.coefficient({i, d - i, 0}) = h[i];
  return p;
}

std::string format_param(Complex c) {
  char buf[64];
  if (c.imag() == 0.0) std::snprintf(buf, sizeof buf, "%g", c.real());
  else std::snprintf(buf, sizeof buf, "%g%+gi", c.real(), c.imag());
  std::string s = buf;
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

LiftVector random_unit(Rng& rng, int n) {
  LiftVector v(n);
  for (int i = 0; i < n; ++i) v[i] = complex_normal(rng);
  return v / v.norm();
}

LiftVector sym2_pair(const LiftVector& p, const LiftVector& q) {
  LiftVector s(3);
  s << p[0] * q[0], p[0] * q[1] + p[1] * q[0], p[1] * q[1];
  return s;
}

}  // namespace

ZooEntry power_map(int d, int k) {
  if (d < 2) throw DomainError("power_map: d must be at least 2");
  if (k < 1 || k > kMaxDim) throw DomainError("power_map: k must be 1 or 2");
  std::vector<HomogeneousPolynomial> comps;
  for (int i = 0; i <= k; ++i) {
    HomogeneousPolynomial p(k + 1, d);
    Exponents e{};
    e[i] = d;
    p.coefficient(e) = 1.0;
    comps.push_back(std::move(p));
  }
  HomogeneousMap f(k, d, std::move(comps), "power_d" + std::to_string(d) + "_k" + std::to_string(k));
  if (k == 2) f.attach_diagonal_power_solver();
  f.validate();
  Expected e;
  e.lambdas = std::vector<double>(k, std::log(static_cast<double>(d)));
  e.dimension = static_cast<double>(k);
  e.notes = "mu is Haar measure on the real torus |z_i| = |z_j|; not Lattes";
  e.construction = {{"kind", "power"}, {"d", d}, {"k", k}};
  return {std::move(f), e};
}

ZooEntry chebyshev(int d) {
  if (d < 2) throw DomainError("chebyshev: d must be at least 2");
  std::vector<Complex> prev{2.0};        // P_0
  std::vector<Complex> cur{0.0, 1.0};    // P_1 = z
  for (int n = 1; n < d; ++n) {
    // P_{n+1} = z P_n - w^2 P_{n-1}; index = power of z.
    std::vector<Complex> next(n + 2, 0.0);
    for (int i = 0; i <= n; ++i) next[i + 1] += cur[i];
    for (int i = 0; i <= n - 1; ++i) next[i] -= prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  std::vector<Complex> wd(d + 1, 0.0);
  wd[0] = 1.0;
  std::vector<HomogeneousPolynomial> comps{binary_polynomial(cur), binary_polynomial(wd)};
  HomogeneousMap f(1, d, std::move(comps), "chebyshev_d" + std::to_string(d));
  f.validate();
  Expected e;
  e.lambdas = std::vector<double>{std::log(static_cast<double>(d))};
  e.dimension = 1.0;
  e.notes = "mu is the arcsine law on [-2, 2]; not Lattes";
  e.construction = {{"kind", "chebyshev"}, {"d", d}};
  return {std::move(f), e};
}

double doubling_commutation_residual(const HomogeneousMap& r, Complex g2, Complex g3, int n_points,
                                     std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  int done = 0;
  while (done < n_points) {
    const Complex x = 1.5 * complex_normal(rng);
    const Complex y = std::sqrt(4.0 * x * x * x - g2 * x - g3);
    if (std::abs(y) < 1e-6) continue;  // 2-torsion: 2P is the point at infinity
    const Complex slope = (12.0 * x * x - g2) / (2.0 * y);
    const Complex x2 = slope * slope / 4.0 - 2.0 * x;
    LiftVector v(2);
    v << x, 1.0;
    const LiftVector image = r.lift(v);
    const LiftVector a = image / image.norm();
    LiftVector b(2);
    b << x2, 1.0;
    b /= b.norm();
    worst = std::max(worst, std::abs(a[0] * b[1] - a[1] * b[0]));
    ++done;
  }
  return worst;
}

ZooEntry lattes_p1_doubling(Complex g2, Complex g3) {
  const Complex disc = g2 * g2 * g2 - 27.0 * g3 * g3;
  const double scale = std::max(std::pow(std::abs(g2), 3), 27.0 * std::norm(g3));
  if (!(scale > 0.0) || std::abs(disc) <= 1e-10 * scale) {
    throw DomainError("lattes_p1_doubling: singular curve (g2^3 = 27 g3^2)");
  }
  const std::vector<Complex> num{g2 * g2 / 16.0, 2.0 * g3, g2 / 2.0, 0.0, 1.0};
  const std::vector<Complex> den{-g3, -g2, 0.0, 4.0, 0.0};
  std::vector<HomogeneousPolynomial> comps{binary_polynomial(num), binary_polynomial(den)};
  HomogeneousMap f(1, 4, std::move(comps), "lattes_doubling_g2_" + format_param(g2) + "_g3_" + format_param(g3));
  f.validate();
  const double residual = doubling_commutation_residual(f, g2, g3, 500, 0xD0B1ULL);
  if (!(residual < 1e-9)) {
    throw NumericError("lattes_p1_doubling: duplication formula fails the group-law check (residual " +
                       std::to_string(residual) + ")");
  }
  Expected e;
  e.lambdas = std::vector<double>{std::log(2.0)};
  e.dimension = 2.0;
  e.lattes = true;
  e.notes = "multiplication by 2 on y^2 = 4x^3 - g2 x - g3 through the Weierstrass x-coordinate";
  e.construction = {{"kind", "lattes_doubling"}, {"g2", {g2.real(), g2.imag()}}, {"g3", {g3.real(), g3.imag()}}};
  return {std::move(f), e};
}

double sym2_semiconjugacy_residual(const HomogeneousMap& f, const HomogeneousMap& g, int n_pairs,
                                   std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < n_pairs; ++i) {
    const LiftVector p = random_unit(rng, 2), q = random_unit(rng, 2);
    const ProjPoint lhs = normalize<double>(sym2_pair(g.lift(p), g.lift(q)));
    const ProjPoint rhs = normalize<double>(f.lift(sym2_pair(p, q)));
    worst = std::max(worst, fs_distance(lhs, rhs));
  }
  return worst;
}

ZooEntry ueda_sym2(const ZooEntry& g) {
  const HomogeneousMap& base = g.map;
  if (base.dim() != 1) throw DomainError("ueda_sym2: needs a map of P^1");
  const int d = base.degree();
  const auto exps = monomials(3, d);
  const int m = static_cast<int>(exps.size());
  const int rows = 4 * m;
  Eigen::MatrixXcd a(rows, m), b(rows, 3);
  Rng rng(0x5E12ULL);
  for (int r = 0; r < rows; ++r) {
    const LiftVector p = random_unit(rng, 2), q = random_unit(rng, 2);
    const LiftVector s = sym2_pair(p, q);
    for (int c = 0; c < m; ++c) {
      Complex v = 1.0;
      for (int j = 0; j < 3; ++j) v *= std::pow(s[j], exps[c][j]);
      a(r, c) = v;
    }
    b.row(r) = sym2_pair(base.lift(p), base.lift(q)).transpose();
  }
  const Eigen::MatrixXcd coeffs = a.colPivHouseholderQr().solve(b);
  const double fit = (a * coeffs - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
  if (!(fit < 1e-8)) {
    throw NumericError("ueda_sym2: symmetric expansion leaves residual " + std::to_string(fit));
  }
  const double cmax = coeffs.cwiseAbs().maxCoeff();
  std::vector<HomogeneousPolynomial> comps;
  for (int i = 0; i < 3; ++i) {
    HomogeneousPolynomial p(3, d);
    for (int c = 0; c < m; ++c) {
      Complex v = coeffs(c, i);
      // Exact coefficients are integers or rationals in the base map's
      // coefficients; fit noise sits at ~1e-15 relative.
      if (std::abs(v.real()) < 1e-12 * cmax) v.real(0.0);
      if (std::abs(v.imag()) < 1e-12 * cmax) v.imag(0.0);
      p.coefficients()[c] = v;
    }
    comps.push_back(std::move(p));
  }
  HomogeneousMap f(2, d, std::move(comps), "sym2_" + base.label());
  f.attach_sym2_solver(std::make_shared<const HomogeneousMap>(base));
  f.validate();
  Expected e;
  if (g.expected.lambdas) {
    e.lambdas = std::vector<double>(2, g.expected.lambdas->front());
  }
  if (g.expected.dimension) e.dimension = 2.0 * *g.expected.dimension;
  e.lattes = g.expected.lattes;
  e.notes = "symmetric square of " + base.label();
  e.construction = {{"kind", "sym2"}, {"factor", base.label()}};
  return {std::move(f), e};
}

double chebyshev_semiconjugacy_residual(const HomogeneousMap& f, int n_points, std::uint64_t seed) {
  Rng rng(seed);
  const int d = f.degree();
  double worst = 0.0;
  for (int i = 0; i < n_points; ++i) {
    const Complex w = std::polar(1.0, 2.0 * M_PI * uniform_real(rng));
    LiftVector v(2);
    v << w + 1.0 / w, 1.0;
    const LiftVector image = f.lift(v);
    worst = std::max(worst, std::abs(image[0] / image[1] - (std::pow(w, d) + std::pow(w, -d))));
  }
  return worst;
}

double constructor_residual(const ZooEntry& entry, int n_points, std::uint64_t seed) {
  const auto& c = entry.expected.construction;
  const std::string kind = c.is_object() ? c.value("kind", std::string()) : std::string();
  if (kind == "chebyshev") return chebyshev_semiconjugacy_residual(entry.map, n_points, seed);
  if (kind == "lattes_doubling") {
    const auto g2 = c.at("g2").get<std::vector<double>>(), g3 = c.at("g3").get<std::vector<double>>();
    return doubling_commutation_residual(entry.map, {g2.at(0), g2.at(1)}, {g3.at(0), g3.at(1)}, n_points, seed);
  }
  if (kind == "sym2" && entry.map.sym2_factor()) {
    return sym2_semiconjugacy_residual(entry.map, *entry.map.sym2_factor(), n_points, seed);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

ZooEntry perturbed_power_map() {
  HomogeneousPolynomial p(2, 2), q(2, 2);
  p.coefficient({2, 0, 0}) = 1.0;
  p.coefficient({0, 2, 0}) = 0.1;
  q.coefficient({0, 2, 0}) = 1.0;
  HomogeneousMap f(1, 2, {p, q}, "perturbed_power_d2");
  f.validate();
  Expected e;
  e.lambdas = std::vector<double>{std::log(2.0)};
  e.notes = "z^2 + 0.1: connected Julia set (quasicircle), lambda = log 2 + sum of G at critical points = log 2";
  e.construction = {{"kind", "perturbed_power"}, {"c", 0.1}};
  return {std::move(f), e};
}

std::vector<ZooEntry> default_zoo() {
  std::vector<ZooEntry> zoo;
  zoo.push_back(power_map(2, 1));
  zoo.push_back(power_map(3, 1));
  zoo.push_back(power_map(2, 2));
  zoo.push_back(chebyshev(2));
  zoo.push_back(chebyshev(3));
  zoo.push_back(lattes_p1_doubling(4.0, 0.0));
  zoo.push_back(ueda_sym2(zoo.back()));
  zoo.push_back(ueda_sym2(power_map(3, 1)));
  zoo.push_back(perturbed_power_map());
  return zoo;
}

ZooEntry zoo_entry(const std::string& label) {
  for (auto& e : default_zoo()) {
    if (e.map.label() == label) return e;
  }
  throw ConfigError("unknown zoo label '" + label + "'");
}

nlohmann::ordered_json expected_to_json(const Expected& e) {
  nlohmann::ordered_json j;
  if (e.lambdas) j["lambdas"] = *e.lambdas;
  else j["lambdas"] = nullptr;
  if (e.dimension) j["dimension"] = *e.dimension;
  else j["dimension"] = nullptr;
  j["lattes"] = e.lattes;
  j["notes"] = e.notes;
  j["construction"] = e.construction;
  return j;
}

Expected expected_from_json(const nlohmann::json& j) {
  Expected e;
  try {
    if (j.contains("lambdas") && !j.at("lambdas").is_null()) e.lambdas = j.at("lambdas").get<std::vector<double>>();
    if (j.contains("dimension") && !j.at("dimension").is_null()) e.dimension = j.at("dimension").get<double>();
    e.lattes = j.value("lattes", false);
    e.notes = j.value("notes", std::string());
    if (j.contains("construction")) e.construction = j.at("construction");
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("expected.json: ") + ex.what());
  }
  return e;
}

void save_zoo_entry(const ZooEntry& entry, const std::string& dir) {
  const std::filesystem::path d = std::filesystem::path(dir) / entry.map.label();
  std::filesystem::create_directories(d);
  save_map(entry.map, (d / "map.json").string());
  std::ofstream out(d / "expected.json");
  if (!out) throw ConfigError("cannot write " + (d / "expected.json").string());
  out << expected_to_json(entry.expected).dump(2) << "\n";
}

ZooEntry load_zoo_entry(const std::string& entry_dir) {
  const std::filesystem::path d(entry_dir);
  HomogeneousMap f = load_map((d / "map.json").string());
  Expected e;
  if (std::filesystem::exists(d / "expected.json")) {
    std::ifstream in(d / "expected.json");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& ex) {
      throw ConfigError(std::string("expected.json: ") + ex.what());
    }
    e = expected_from_json(j);
  }
  return {std::move(f), e};
}

}  // namespace greenlab
