// Acceptance run: one PASS/FAIL line per criterion, tolerances pinned below.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "greenlab/dimension.hpp"
#include "greenlab/experiment.hpp"
#include "greenlab/linearization.hpp"
#include "greenlab/lyapunov.hpp"
#include "greenlab/zoo.hpp"

using namespace greenlab;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 1;

// 1
constexpr double kGreenTol = 1e-8;
constexpr int kGreenLifts = 100;
constexpr int kInvarianceFunctions = 20;
constexpr int kInvarianceSample = 2000;
constexpr double kPerMapSeconds = 10.0;
// 2
constexpr double kGradientTol = 1e-5;
constexpr int kGradientPoints = 100;
constexpr double kNonCritical = 1e-3;
constexpr double kFdStep = 1e-5;
// 3
constexpr int kOrbits = 500;
constexpr int kSteps = 200;
constexpr double kBdSeconds = 60.0;
// 4
constexpr double kPowerLambdaTol = 1e-3;
constexpr double kPowerDimTol = 0.1;
constexpr double kVDecay = 0.05;
constexpr int kVDecayBy = 8;
constexpr double kDivergingFraction = 0.95;
// 5
constexpr double kCommutationTol = 1e-9;
constexpr double kLattesLambdaRel = 0.02;
constexpr double kLattesDimTol = 0.15;
constexpr double kLattesVFloor = 0.3;
constexpr double kConvergingFraction = 0.80;
constexpr double kLattesSeconds = 300.0;
// 6
constexpr double kSemiconjugacyTol = 1e-9;
constexpr double kSym2LambdaRel = 0.03;
constexpr double kSandwichSlack = 0.1;
constexpr double kSym2Seconds = 600.0;
constexpr int kJacobianSample = 20000;
constexpr double kTau = 10.0;
// shared
constexpr int kDimPoints = 5000;
constexpr int kMassPoints = 500;
constexpr int kMassNMax = 12;
constexpr double kNu = 0.3;
constexpr int kLinPoints = 20;
constexpr int kLinMaxN = 3000;
constexpr double kLinBall = 0.05;
constexpr double kLinRecurrence = 1.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d (%s): %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

LiftVector random_lift(Rng& rng, int n) {
  LiftVector v(n);
  for (int i = 0; i < n; ++i) v[i] = complex_normal(rng);
  return v;
}

// Central differences of tau_y^{-1} o f o tau_x at 0, from the lift directly.
ChartMatrix fd_differential(const HomogeneousMap& f, const ProjPoint& x) {
  const Chart cx = chart_at(x);
  const Chart cy = chart_at(normalize<double>(f.lift(x.coords())));
  const int k = x.dim();
  auto g = [&](const ChartVector& u) {
    const LiftVector image = f.lift(cx.center.coords() + cx.frame * u);
    return ChartVector(cy.frame.adjoint() * image / cy.center.coords().dot(image));
  };
  ChartMatrix a(k, k);
  for (int j = 0; j < k; ++j) {
    ChartVector e = ChartVector::Zero(k);
    e[j] = kFdStep;
    a.col(j) = (g(e) - g(-e)) / (2 * kFdStep);
  }
  return a;
}

SpectrumEstimate spectrum(const ZooEntry& e, std::uint64_t seed) {
  const MeasureSample s = sample_measure(e.map, kOrbits, kDefaultBurnIn, seed);
  SpectrumOptions o;
  o.seed = derive_seed(seed, 1);
  return lyapunov_spectrum(e.map, s, kSteps, o);
}

double v_mass_min(const HomogeneousMap& f, std::uint64_t seed, int n_max, double* at_n_max = nullptr) {
  const MeasureSample s = sample_measure(f, kMassPoints, kDefaultBurnIn, seed);
  MassCurveOptions o;
  o.n_max = n_max;
  o.rhos = {0.05};
  o.taus = {10.0};
  o.nus = {kNu};
  o.seed = derive_seed(seed, 2);
  const auto mc = mass_curves(f, s, o);
  double m = 1.0;
  for (const auto& row : mc.curves[0].rows) m = std::min(m, row.v.mass);
  if (at_n_max) *at_n_max = mc.curves[0].rows.back().v.mass;
  return m;
}

std::map<TraceVerdict, int> sqrt_d_verdicts(const HomogeneousMap& f, std::uint64_t seed) {
  const MeasureSample s = sample_measure(f, kLinPoints, kDefaultBurnIn, seed);
  std::vector<TraceVerdict> v(s.points.size());
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    Rng rng(derive_seed(seed, i + 1));
    const Orbit o = extension_orbit(f, s.points[i], kLinMaxN, rng);
    v[i] = sqrt_d_linearization_test(f, o, kLinMaxN, kLinBall, kLinRecurrence).verdict;
  }
  std::map<TraceVerdict, int> out;
  for (auto t : v) ++out[t];
  return out;
}

void criterion_1(const std::vector<ZooEntry>& zoo) {
  double worst = 0.0, slowest = 0.0;
  int pass = 0, total = 0;
  std::string slow_map;
  for (const auto& e : zoo) {
    const auto t0 = Clock::now();
    Rng rng(derive_seed(kSeed, 11));
    const double d = e.map.degree();
    for (int i = 0; i < kGreenLifts; ++i) {
      const LiftVector v = random_lift(rng, e.map.dim() + 1);
      worst = std::max(worst, std::abs(green_function(e.map, e.map.lift(v)).value - d * green_function(e.map, v).value));
    }
    const auto s = sample_measure(e.map, kInvarianceSample, kDefaultBurnIn, derive_seed(kSeed, 12));
    for (const auto& c : pushforward_invariance(e.map, s, kInvarianceFunctions)) {
      ++total;
      pass += c.pass ? 1 : 0;
    }
    const double dt = seconds_since(t0);
    if (dt > slowest) {
      slowest = dt;
      slow_map = e.map.label();
    }
  }
  report(1, "functional equations", worst < kGreenTol && pass == total && slowest < kPerMapSeconds,
         fmt("max |G(Fv) - d G(v)| = %.2e (tol %.0e) over %zu maps; invariance %d/%d within 3 SE; slowest map %s "
             "%.2f s (limit %.0f s)",
             worst, kGreenTol, zoo.size(), pass, total, slow_map.c_str(), slowest, kPerMapSeconds));
}

void criterion_2(const std::vector<ZooEntry>& zoo) {
  double worst = 0.0;
  std::string worst_map;
  for (const auto& e : zoo) {
    Rng rng(derive_seed(kSeed, 21));
    int done = 0;
    while (done < kGradientPoints) {
      const ProjPoint x = normalize<double>(random_lift(rng, e.map.dim() + 1));
      if (critical_proximity(e.map, x) < kNonCritical) continue;
      const ChartMatrix a = chart_differential(e.map, x);
      const double err = (a - fd_differential(e.map, x)).norm() / a.norm();
      if (err > worst) {
        worst = err;
        worst_map = e.map.label();
      }
      ++done;
    }
  }
  report(2, "gradient check", worst < kGradientTol,
         fmt("max relative error %.2e (tol %.0e, %s) at %d points per map", worst, kGradientTol, worst_map.c_str(),
             kGradientPoints));
}

void criterion_3(const std::vector<ZooEntry>& zoo) {
  const auto t0 = Clock::now();
  int pass = 0;
  double worst_margin = INFINITY;
  std::string worst_map;
  for (const auto& e : zoo) {
    const auto est = spectrum(e, derive_seed(kSeed, 31));
    const auto bd = briend_duval_check(est, e.map.degree());
    pass += bd.bound_pass ? 1 : 0;
    if (bd.bound_margin_se < worst_margin) {
      worst_margin = bd.bound_margin_se;
      worst_map = e.map.label();
    }
  }
  const double dt = seconds_since(t0);
  report(3, "Briend-Duval bound", pass == static_cast<int>(zoo.size()) && dt < kBdSeconds,
         fmt("%d/%zu maps with lambda_1 >= log(d)/2 - 3 SE (%d orbits x %d steps); smallest margin %.2f SE (%s); "
             "%.1f s (limit %.0f s)",
             pass, zoo.size(), kOrbits, kSteps, worst_margin, worst_map.c_str(), dt, kBdSeconds));
}

void criterion_4() {
  const auto e = power_map(2, 1);
  const auto est = spectrum(e, derive_seed(kSeed, 41));
  const double lambda_err = std::abs(est.lambdas[0] - std::log(2.0));
  const auto s = sample_measure(e.map, kDimPoints, kDefaultBurnIn, derive_seed(kSeed, 42));
  const auto dim = local_dimension(s);
  const double bound = dim_upper_bound(1, 2, std::log(2.0));
  double v_at;
  v_mass_min(e.map, derive_seed(kSeed, 43), kVDecayBy, &v_at);
  auto verdicts = sqrt_d_verdicts(e.map, derive_seed(kSeed, 44));
  const double div = verdicts[TraceVerdict::diverging] / static_cast<double>(kLinPoints);
  const bool pass = lambda_err < kPowerLambdaTol && std::abs(dim.measured_local_dim - 1.0) < kPowerDimTol &&
                    bound == 1.0 && v_at < kVDecay && div >= kDivergingFraction;
  report(4, "power map ground truth", pass,
         fmt("lambda = %.6f (|err| %.1e, tol %.0e); local dim %.3f (1 +- %.1f); bound %.17g; V_%d(%.1f) mass %.3f "
             "(< %.2f); sqrt(d) diverging %d/%d (>= %.0f%%)",
             est.lambdas[0], lambda_err, kPowerLambdaTol, dim.measured_local_dim, kPowerDimTol, bound, kVDecayBy, kNu,
             v_at, kVDecay, verdicts[TraceVerdict::diverging], kLinPoints, 100 * kDivergingFraction));
}

void criterion_5() {
  const auto t0 = Clock::now();
  const auto e = lattes_p1_doubling(4.0, 0.0);
  const double residual = doubling_commutation_residual(e.map, 4.0, 0.0, 500, derive_seed(kSeed, 50));
  const auto est = spectrum(e, derive_seed(kSeed, 51));
  const double rel = std::abs(est.lambdas[0] / std::log(2.0) - 1.0);
  const auto mv = exponent_minimality_test(est, 4);
  const auto s = sample_measure(e.map, kDimPoints, kDefaultBurnIn, derive_seed(kSeed, 52));
  const auto dim = local_dimension(s);
  const double v_min = v_mass_min(e.map, derive_seed(kSeed, 53), kMassNMax);
  auto verdicts = sqrt_d_verdicts(e.map, derive_seed(kSeed, 54));
  const double conv = verdicts[TraceVerdict::converging] / static_cast<double>(kLinPoints);
  const double dt = seconds_since(t0);
  const bool pass = residual < kCommutationTol && rel < kLattesLambdaRel && mv.minimal &&
                    std::abs(dim.measured_local_dim - 2.0) < kLattesDimTol && v_min >= kLattesVFloor &&
                    conv >= kConvergingFraction && dt < kLattesSeconds;
  report(5, "Lattes doubling map", pass,
         fmt("commutation %.1e (< %.0e); lambda = %.5f (rel %.2f%%, tol %.0f%%); minimal %s (margin %.2f SE); "
             "local dim %.3f (2 +- %.2f); min_n<=%d V(%.1f) mass %.3f (>= %.1f); sqrt(d) converging %d/%d "
             "(>= %.0f%%); %.1f s (limit %.0f s)",
             residual, kCommutationTol, est.lambdas[0], 100 * rel, 100 * kLattesLambdaRel, mv.minimal ? "yes" : "no",
             mv.margin_se, dim.measured_local_dim, kLattesDimTol, kMassNMax, kNu, v_min, kLattesVFloor,
             verdicts[TraceVerdict::converging], kLinPoints, 100 * kConvergingFraction, dt, kLattesSeconds));
}

void criterion_6() {
  const auto t0 = Clock::now();
  const auto base = lattes_p1_doubling(4.0, 0.0);
  const auto e = ueda_sym2(base);
  const double residual = sym2_semiconjugacy_residual(e.map, base.map, 500, derive_seed(kSeed, 60));
  const auto est = spectrum(e, derive_seed(kSeed, 61));
  double rel = 0.0;
  for (double l : est.lambdas) rel = std::max(rel, std::abs(l / std::log(2.0) - 1.0));
  // Sum rule against an independent estimate of the integral of log |det Df|
  // over a fresh sample of the measure.
  const auto fresh = sample_measure(e.map, kJacobianSample, kDefaultBurnIn, derive_seed(kSeed, 69));
  double acc = 0.0, acc2 = 0.0;
  for (const auto& x : fresh.points) {
    const double v = std::log(std::abs(chart_differential(e.map, x).determinant()));
    acc += v;
    acc2 += v * v;
  }
  const double nj = static_cast<double>(fresh.points.size());
  const double jac_mean = acc / nj;
  const double jac_se = std::sqrt(std::max(0.0, acc2 / nj - jac_mean * jac_mean) / (nj - 1));
  double lambda_se2 = 0.0;
  for (double se : est.standard_errors) lambda_se2 += se * se;
  const double sum_residual = std::abs(est.lambdas[0] + est.lambdas[1] - jac_mean);
  const double sum_se = std::max(std::sqrt(lambda_se2 + jac_se * jac_se), kStandardErrorFloor);
  const bool sum_ok = sum_residual < 3.0 * sum_se && est.sum_check_residual < 1e-9;
  const auto s = sample_measure(e.map, kMassPoints, kDefaultBurnIn, derive_seed(kSeed, 62));
  long checked = 0, violations = 0;
  double max_cond = 0.0;
  for (int n : {4, 8, 12}) {
    const auto p = distortion_profile(e.map, s, n, 0.05, kTau, kNu, derive_seed(kSeed, 63 + n), 0, kSandwichSlack);
    checked += p.checked;
    violations += p.violations;
    max_cond = std::max(max_cond, p.max_condition_checked);
  }
  const double dt = seconds_since(t0);
  const bool pass = residual < kSemiconjugacyTol && rel < kSym2LambdaRel && sum_ok && checked > 0 && violations == 0 &&
                    dt < kSym2Seconds;
  report(6, "Sym2 Lattes map", pass,
         fmt("semiconjugacy %.1e (< %.0e); lambdas = (%.5f, %.5f) (max rel %.2f%%, tol %.0f%%); sum rule residual "
             "|%.5f - %.5f| = %.2e vs 3 SE = %.2e (independent sample of %d); sandwich %ld/%ld LB&V points ok "
             "(n = 4, 8, 12; max cond %.2f <= %.1f); %.1f s (limit %.0f s)",
             residual, kSemiconjugacyTol, est.lambdas[0], est.lambdas[1], 100 * rel, 100 * kSym2LambdaRel,
             est.lambdas[0] + est.lambdas[1], jac_mean, sum_residual, 3.0 * sum_se, kJacobianSample,
             checked - violations, checked, max_cond, kTau * kTau / kNu * (1 + kSandwichSlack), dt, kSym2Seconds));
}

void criterion_7(const std::vector<ZooEntry>& zoo) {
  long evaluated = 0, pointwise = 0, mass_checked = 0, mass_violations = 0;
  for (const auto& e : zoo) {
    const auto s = sample_measure(e.map, 200, kDefaultBurnIn, derive_seed(kSeed, 71));
    MassCurveOptions o;
    o.n_max = kMassNMax;
    o.seed = derive_seed(kSeed, 72);
    const auto mc = mass_curves(e.map, s, o);
    evaluated += mc.inclusions.evaluated;
    pointwise += mc.inclusions.lb_not_in_b + mc.inclusions.rho_monotonicity + mc.inclusions.tau_monotonicity +
                 mc.inclusions.nu_monotonicity;
    auto find = [&](double rho, double tau, double nu) -> const MassCurve* {
      for (const auto& m : mc.curves)
        if (m.rho == rho && m.tau == tau && m.nu == nu) return &m;
      return nullptr;
    };
    auto cmp = [&](const MassEstimate& big, const MassEstimate& small) {
      ++mass_checked;
      if (small.mass > big.mass + 2.0 * std::hypot(big.standard_error, small.standard_error)) ++mass_violations;
    };
    for (const auto& m : mc.curves) {
      for (std::size_t r = 0; r < m.rows.size(); ++r) {
        cmp(m.rows[r].b, m.rows[r].lb);
        if (const MassCurve* o2 = find(m.rho / 2, m.tau, m.nu)) cmp(o2->rows[r].b, m.rows[r].b);
        for (double tau : o.taus)
          if (tau > m.tau) cmp(find(m.rho, tau, m.nu)->rows[r].lb, m.rows[r].lb);
        for (double nu : o.nus)
          if (nu < m.nu) cmp(find(m.rho, m.tau, nu)->rows[r].v, m.rows[r].v);
      }
    }
  }
  report(7, "set inclusions", pointwise == 0 && mass_violations == 0,
         fmt("%ld pointwise violations of LB in B and rho/tau/nu monotonicity over %ld (point, n) pairs on %zu "
             "maps; %ld/%ld mass comparisons within 2 SE",
             pointwise, evaluated, zoo.size(), mass_checked - mass_violations, mass_checked));
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    files[fs::relative(entry.path(), dir).string()] = os.str();
  }
  return files;
}

void criterion_8() {
  const fs::path root = fs::temp_directory_path() / "greenlab_acceptance_determinism";
  fs::remove_all(root);
  ExperimentConfig c;
  c.map = "lattes_doubling_g2_4_g3_0";
  c.seed = 7;
  c.sample_count = 500;
  c.n_orbits = 200;
  c.n_steps = 100;
  c.mass_points = 200;
  c.n_max = 6;
  c.lin_points = 3;
  c.max_n = 1000;
  c.dim_points = 2000;
  const std::vector<std::string> subs{"sample", "exponents", "masses", "linearize", "dimension", "verdict",
                                      "validate-zoo"};
  std::map<std::string, std::string> first, second;
  for (const char* run : {"a", "b"}) {
    c.output_dir = (root / run).string();
    for (const auto& sub : subs) run_subcommand(sub, c);
  }
  first = snapshot(root / "a");
  second = snapshot(root / "b");
  int differing = 0;
  for (const auto& [name, content] : first) {
    auto it = second.find(name);
    if (it == second.end() || it->second != content) ++differing;
  }
  const bool pass = first.size() == second.size() && differing == 0 && !first.empty();
  report(8, "determinism", pass,
         fmt("%zu subcommands run twice; %zu files compared, %d differ", subs.size(), first.size(), differing));
  fs::remove_all(root);
}

void criterion_9() {
  const auto e = perturbed_power_map();
  const auto est = spectrum(e, derive_seed(kSeed, 91));
  const auto mv = exponent_minimality_test(est, 2);
  const double bound = dim_upper_bound(1, 2, est.lambdas.back());
  report(9, "negative control", !mv.minimal && mv.margin_se > 3.0 && bound < 2.0,
         fmt("perturbed power map lambda = %.5f; minimality margin %.1f SE (> 3); dimension bound %.4f (< 2)",
             est.lambdas[0], mv.margin_se, bound));
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  const auto zoo = default_zoo();
  const std::vector<std::pair<int, std::function<void()>>> criteria{
      {1, [&] { criterion_1(zoo); }}, {2, [&] { criterion_2(zoo); }}, {3, [&] { criterion_3(zoo); }},
      {4, criterion_4},                {5, criterion_5},                {6, criterion_6},
      {7, [&] { criterion_7(zoo); }}, {8, criterion_8},                {9, criterion_9}};
  for (const auto& [id, run] : criteria) {
    try {
      run();
    } catch (const std::exception& ex) {
      report(id, "exception", false, ex.what());
    }
  }
  std::printf("%d of %zu criteria failed; total %.1f s\n", failures, criteria.size(), seconds_since(t0));
  return failures;
}
