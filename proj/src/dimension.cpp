#include "greenlab/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "greenlab/parallel.hpp"

namespace greenlab {

namespace {

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

double quantile(std::vector<double> v, double q) {
  const std::size_t i = static_cast<std::size_t>(q * static_cast<double>(v.size() - 1));
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(i), v.end());
  return v[i];
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) r[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return r;
}

// counts[i * m + j]: points other than i within radii[j] of point i.
std::vector<long> neighbour_counts(const std::vector<ProjPoint>& pts, const std::vector<double>& radii) {
  const std::size_t n = pts.size(), m = radii.size();
  std::vector<double> cos_r(m);
  for (std::size_t j = 0; j < m; ++j) cos_r[j] = std::cos(radii[j]);
  std::vector<long> counts(n * m, 0);
  parallel_for(n, [&](std::size_t i) {
    long* row = &counts[i * m];
    for (std::size_t p = 0; p < n; ++p) {
      if (p == i) continue;
      const double overlap = std::abs(pts[i].coords().dot(pts[p].coords()));
      if (overlap <= cos_r[m - 1]) continue;
      // radii ascending, so cos_r descending: count every radius the pair is inside.
      for (std::size_t j = m; j-- > 0;) {
        if (overlap > cos_r[j]) ++row[j];
        else break;
      }
    }
  });
  return counts;
}

}  // namespace

double dim_upper_bound(int k, int d, double lambda_k) {
  if (!(lambda_k > 0.0)) throw DomainError("dim_upper_bound: lambda_k must be positive");
  if (k < 1 || d < 2) throw DomainError("dim_upper_bound: need k >= 1 and d >= 2");
  if (lambda_k < 0.98 * 0.5 * std::log(static_cast<double>(d))) {
    warn("dim_upper_bound: lambda_k lies below log(d)/2");
  }
  return 2.0 * (k - 1) + std::log(static_cast<double>(d)) / lambda_k;
}

DimensionReport local_dimension(const MeasureSample& sample, double r_min, double r_max,
                                const DimensionOptions& options) {
  const int available = static_cast<int>(sample.points.size());
  const int n = options.max_points > 0 ? std::min(options.max_points, available) : available;
  if (n < options.min_points) {
    throw DomainError("local_dimension: needs at least " + std::to_string(options.min_points) + " points");
  }
  if (options.n_radii < 8) throw DomainError("local_dimension: needs at least 8 radii");
  const std::vector<ProjPoint> pts(sample.points.begin(), sample.points.begin() + n);

  DimensionReport rep;
  rep.k = sample.dim;
  rep.upper_bound = std::numeric_limits<double>::quiet_NaN();

  if (r_min <= 0.0 && r_max <= 0.0) {
    std::vector<double> dist;
    const int rows = std::min(n, 400);
    for (int i = 0; i < rows; ++i) {
      for (int j = i + 1; j < n; ++j) dist.push_back(fs_distance(pts[i], pts[j]));
    }
    r_max = std::min(0.2, quantile(dist, 0.5));
    r_min = std::min(std::max(quantile(dist, 0.05), r_max / 4.0), r_max / 2.0);
  }
  if (!(r_min > 1e-12 && r_min < r_max && r_max <= 0.2 + 1e-15)) {
    throw DomainError("local_dimension: need 0 < r_min < r_max <= 0.2");
  }

  std::vector<double> radii;
  std::vector<long> counts, pairs;
  for (;;) {
    radii = log_spaced(r_min, r_max, options.n_radii);
    counts = neighbour_counts(pts, radii);
    pairs.assign(radii.size(), 0);
    for (int i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < radii.size(); ++j) pairs[j] += counts[i * radii.size() + j];
    }
    for (auto& p : pairs) p /= 2;
    if (pairs.front() >= 100) break;
    if (r_min * 1.25 >= r_max / 1.5) {
      warn("local_dimension: fewer than 100 pairs at the smallest radius even after widening");
      break;
    }
    r_min *= 1.25;
    rep.widened = true;
  }
  if (rep.widened) warn("local_dimension: radius range widened to keep >= 100 pairs per radius");

  const std::size_t m = radii.size();
  std::vector<double> x(m), y(m, 0.0), yc(m);
  for (std::size_t j = 0; j < m; ++j) x[j] = std::log(std::sin(radii[j]));
  auto local_slope = [&](const std::vector<int>& centres) {
    std::vector<double> acc(m, 0.0);
    for (int i : centres) {
      for (std::size_t j = 0; j < m; ++j) acc[j] += std::log(counts[i * m + j] + 0.5);
    }
    for (auto& a : acc) a /= static_cast<double>(centres.size());
    return ls_slope(x, acc);
  };
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  rep.measured_local_dim = local_slope(all);

  const double total_pairs = 0.5 * static_cast<double>(n) * (n - 1);
  for (std::size_t j = 0; j < m; ++j) yc[j] = std::log(std::max<double>(pairs[j], 0.5) / total_pairs);
  rep.correlation_dim = ls_slope(x, yc);

  Rng rng(options.bootstrap_seed);
  std::vector<double> boot;
  boot.reserve(options.bootstrap);
  std::vector<int> pick(n);
  for (int b = 0; b < options.bootstrap; ++b) {
    for (int i = 0; i < n; ++i) pick[i] = static_cast<int>(uniform_index(rng, n));
    boot.push_back(local_slope(pick));
  }
  std::sort(boot.begin(), boot.end());
  const double lo = boot[static_cast<std::size_t>(0.025 * (boot.size() - 1))];
  const double hi = boot[static_cast<std::size_t>(std::ceil(0.975 * (boot.size() - 1)))];
  rep.ci95 = {std::min(lo, rep.measured_local_dim), std::max(hi, rep.measured_local_dim)};
  rep.r_range = {r_min, r_max};
  rep.radii = radii;
  rep.counts = pairs;
  rep.n_pairs = pairs.back();
  return rep;
}

void attach_bound(DimensionReport& report, int d, const SpectrumEstimate& spectrum) {
  report.d = d;
  report.k = static_cast<int>(spectrum.lambdas.size());
  report.lambda_k = spectrum.lambdas.back();
  report.upper_bound = dim_upper_bound(report.k, d, report.lambda_k);
}

DimensionConsistency dimension_consistency(const DimensionReport& report, const SpectrumEstimate& spectrum, int d) {
  DimensionConsistency c;
  const int k = static_cast<int>(spectrum.lambdas.size());
  const double bound = dim_upper_bound(k, d, spectrum.lambdas.back());
  c.slack = std::max(report.ci95.second - report.ci95.first, 0.1);
  c.within_bound = report.measured_local_dim <= bound + c.slack;
  c.maximal_candidate = report.measured_local_dim > 2.0 * k - 0.2;
  c.exponents_minimal = exponent_minimality_test(spectrum, d).minimal;
  c.consistent = c.within_bound && (!c.maximal_candidate || c.exponents_minimal);
  return c;
}

nlohmann::ordered_json dimension_json(const DimensionReport& r) {
  nlohmann::ordered_json j;
  j["k"] = r.k;
  j["d"] = r.d;
  j["lambda_k"] = r.lambda_k;
  if (std::isnan(r.upper_bound)) j["upper_bound"] = nullptr;
  else j["upper_bound"] = r.upper_bound;
  j["measured"] = r.measured_local_dim;
  j["ci95"] = {r.ci95.first, r.ci95.second};
  j["correlation_dim"] = r.correlation_dim;
  j["r_range"] = {r.r_range.first, r.r_range.second};
  j["radii"] = r.radii;
  j["counts"] = r.counts;
  j["n_pairs"] = r.n_pairs;
  j["widened"] = r.widened;
  return j;
}

}  // namespace greenlab
