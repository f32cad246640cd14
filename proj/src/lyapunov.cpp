#include "greenlab/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "greenlab/parallel.hpp"

namespace greenlab {

namespace {

struct OrbitResult {
  std::vector<double> rates;
  double det_rate = 0.0;
  bool dropped = false;
};

double floored(double se) { return std::max(se, kStandardErrorFloor); }

}  // namespace

SpectrumEstimate lyapunov_spectrum(const HomogeneousMap& f, const MeasureSample& sample, int n_steps,
                                   const SpectrumOptions& options) {
  if (n_steps < 50) throw DomainError("lyapunov_spectrum: n_steps must be at least 50");
  const int available = static_cast<int>(sample.points.size());
  if (available < 100) throw DomainError("lyapunov_spectrum: sample needs at least 100 points");
  const int n_orbits = options.n_orbits > 0 ? std::min(options.n_orbits, available) : available;
  const int n0 = options.transient >= 0 ? options.transient : n_steps / 4;
  if (n0 >= n_steps) throw DomainError("lyapunov_spectrum: transient must be shorter than n_steps");
  const int k = f.dim();
  const double span = n_steps - n0;

  std::vector<OrbitResult> results(n_orbits);
  parallel_for(n_orbits, [&](std::size_t i) {
    Orbit orbit;
    if (options.forward) {
      orbit = forward_orbit(f, sample.points[i], n_steps);
    } else {
      Rng rng(derive_seed(options.seed, i));
      orbit = extension_orbit(f, sample.points[i], n_steps, rng);
    }
    Cocycle c = identity_cocycle(orbit.points.front());
    Cocycle at_n0 = c;
    Chart from = chart_at(orbit.points.front(), options.basis);
    for (int step = 0; step < n_steps; ++step) {
      if (step == n0) at_n0 = c;
      Chart to = chart_at(orbit.points[step + 1], options.basis);
      extend_cocycle(c, chart_differential(f, from, to));
      from = std::move(to);
    }
    OrbitResult& r = results[i];
    if (c.near_critical) {
      r.dropped = true;
      return;
    }
    r.rates.resize(k);
    for (int j = 0; j < k; ++j) {
      r.rates[j] = (c.log_singular_values[j] - at_n0.log_singular_values[j]) / span;
    }
    r.det_rate = (c.log_abs_det - at_n0.log_abs_det) / span;
  });

  SpectrumEstimate est;
  est.n_steps = n_steps;
  est.transient = n0;
  std::vector<double> sum(k, 0.0), sq(k, 0.0);
  double det_sum = 0.0, det_sq = 0.0;
  for (const auto& r : results) {
    if (r.dropped) {
      ++est.dropped;
      continue;
    }
    ++est.n_orbits;
    for (int j = 0; j < k; ++j) {
      sum[j] += r.rates[j];
      sq[j] += r.rates[j] * r.rates[j];
    }
    det_sum += r.det_rate;
    det_sq += r.det_rate * r.det_rate;
  }
  if (est.dropped > 0.01 * n_orbits) {
    warn("lyapunov_spectrum: " + std::to_string(est.dropped) + " of " + std::to_string(n_orbits) +
         " orbits dropped as near-critical");
  }
  const int m = est.n_orbits;
  if (m < 2) throw NumericError("lyapunov_spectrum: fewer than two usable orbits");
  auto se_of = [m](double s, double s2) {
    const double mean = s / m;
    const double var = std::max(0.0, (s2 - m * mean * mean) / (m - 1));
    return std::sqrt(var / m);
  };
  double lambda_sum = 0.0;
  for (int j = 0; j < k; ++j) {
    est.lambdas.push_back(sum[j] / m);
    est.standard_errors.push_back(se_of(sum[j], sq[j]));
    lambda_sum += sum[j] / m;
  }
  // With equal exponents the two differenced means can cross; keep them ascending.
  if (k == 2 && est.lambdas[0] > est.lambdas[1]) {
    std::swap(est.lambdas[0], est.lambdas[1]);
    std::swap(est.standard_errors[0], est.standard_errors[1]);
  }
  est.jacobian_rate = det_sum / m;
  est.sum_check_residual = std::abs(lambda_sum - est.jacobian_rate);
  double sum_se2 = 0.0;
  for (double se : est.standard_errors) sum_se2 += se * se;
  est.sum_check_se = std::sqrt(sum_se2 + std::pow(se_of(det_sum, det_sq), 2));
  return est;
}

BriendDuvalReport briend_duval_check(const SpectrumEstimate& est, int d) {
  if (est.lambdas.empty()) throw DomainError("briend_duval_check: empty estimate");
  BriendDuvalReport r;
  r.half_log_d = 0.5 * std::log(static_cast<double>(d));
  const double l1 = est.lambdas.front(), lk = est.lambdas.back();
  const double se1 = floored(est.standard_errors.front()), sek = floored(est.standard_errors.back());
  r.bound_margin_se = (l1 - r.half_log_d) / se1;
  r.bound_pass = r.bound_margin_se >= -3.0;
  r.narrow_margin_se = (2.0 * l1 - lk) / std::sqrt(4.0 * se1 * se1 + sek * sek);
  r.narrow_pass = r.narrow_margin_se >= -3.0;
  return r;
}

MinimalityVerdict exponent_minimality_test(const SpectrumEstimate& est, int d) {
  const double half = 0.5 * std::log(static_cast<double>(d));
  MinimalityVerdict v;
  for (std::size_t i = 0; i < est.lambdas.size(); ++i) {
    v.margin_se = std::max(v.margin_se, std::abs(est.lambdas[i] - half) / floored(est.standard_errors[i]));
  }
  v.minimal = v.margin_se < 3.0;
  return v;
}

nlohmann::ordered_json spectrum_report(const SpectrumEstimate& est, int d) {
  const auto bd = briend_duval_check(est, d);
  const auto mv = exponent_minimality_test(est, d);
  nlohmann::ordered_json j;
  j["lambdas"] = est.lambdas;
  j["ses"] = est.standard_errors;
  j["half_log_d"] = bd.half_log_d;
  j["bd_margin"] = bd.bound_margin_se;
  j["bd_pass"] = bd.bound_pass;
  j["narrow_spectrum_margin"] = bd.narrow_margin_se;
  j["narrow_spectrum_pass"] = bd.narrow_pass;
  j["minimality_margin"] = mv.margin_se;
  j["minimal"] = mv.minimal;
  j["n_steps"] = est.n_steps;
  j["transient"] = est.transient;
  j["n_orbits"] = est.n_orbits;
  j["dropped"] = est.dropped;
  j["jacobian_rate"] = est.jacobian_rate;
  j["sum_check_residual"] = est.sum_check_residual;
  j["sum_check_se"] = est.sum_check_se;
  return j;
}

}  // namespace greenlab
