#ifndef GREENLAB_DIMENSION_HPP
#define GREENLAB_DIMENSION_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include <json.hpp>

#include "greenlab/green_measure.hpp"
#include "greenlab/lyapunov.hpp"

namespace greenlab {

/// 2(k-1) + log d / lambda_k. Throws DomainError for lambda_k <= 0.
double dim_upper_bound(int k, int d, double lambda_k);

struct DimensionReport {
  int k = 1;
  int d = 0;
  double lambda_k = 0.0;
  double upper_bound = 0.0;  // NaN when no exponent was supplied
  /// Slope of mean_i log(c_i(r) + 1/2) against log sin r, where c_i(r)
  /// counts sample points within FS distance r of point i.
  double measured_local_dim = 0.0;
  std::pair<double, double> ci95{0.0, 0.0};
  /// Slope of log C(r) (pair fraction within r) against log sin r.
  double correlation_dim = 0.0;
  std::pair<double, double> r_range{0.0, 0.0};
  long n_pairs = 0;  // pairs within r_max
  std::vector<double> radii;
  std::vector<long> counts;  // pairs within each radius
  bool widened = false;
};

struct DimensionOptions {
  int n_radii = 10;
  int bootstrap = 200;
  std::uint64_t bootstrap_seed = 0x5EEDB007ULL;
  /// Sample points used (0: all).
  int max_points = 0;
  /// Smallest sample accepted.
  int min_points = 2000;
};

/// Local dimension of the sampled measure over radii log-spaced in
/// [r_min, r_max] (FS radians). r_min = r_max = 0 picks the range from the
/// pairwise distances: r_max = min(0.2, median), r_min = max(5th percentile,
/// r_max / 4). Radii with fewer than 100 pairs push r_min up, with a warning.
/// The volume of an FS ball of radius r in P^k is proportional to sin(r)^{2k},
/// hence the log sin r abscissa. The 95% interval comes from a bootstrap over
/// centres with a fixed seed. The statistic estimates a pointwise/correlation
/// dimension, which in general is not the Hausdorff dimension of mu.
DimensionReport local_dimension(const MeasureSample& sample, double r_min = 0.0, double r_max = 0.0,
                                const DimensionOptions& options = {});

/// Fills k, d, lambda_k and upper_bound from a spectrum.
void attach_bound(DimensionReport& report, int d, const SpectrumEstimate& spectrum);

struct DimensionConsistency {
  bool within_bound = false;       // measured <= upper bound + slack
  double slack = 0.0;              // max(CI width, 0.1)
  bool maximal_candidate = false;  // measured > 2k - 0.2
  bool exponents_minimal = false;
  /// within_bound and (not maximal, or maximal with minimal exponents).
  bool consistent = false;
};

DimensionConsistency dimension_consistency(const DimensionReport& report, const SpectrumEstimate& spectrum, int d);

/// {k, d, lambda_k, upper_bound, measured, ci95, radii, counts, ...}.
nlohmann::ordered_json dimension_json(const DimensionReport& report);

}  // namespace greenlab

#endif  // GREENLAB_DIMENSION_HPP
