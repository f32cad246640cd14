#ifndef GREENLAB_LYAPUNOV_HPP
#define GREENLAB_LYAPUNOV_HPP

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "greenlab/green_measure.hpp"

namespace greenlab {

struct SpectrumOptions {
  /// Orbits used; 0 means one per sample point.
  int n_orbits = 0;
  /// Steps discarded before averaging; negative means n_steps / 4.
  int transient = -1;
  /// Iterate forwards from the sample points instead of along extension orbits.
  bool forward = false;
  /// Chart frames built from this basis (null: canonical).
  const LiftMatrix* basis = nullptr;
  /// Seed for the preimage choices of the extension orbits.
  std::uint64_t seed = 0;
};

struct SpectrumEstimate {
  std::vector<double> lambdas;  // ascending, nats per iteration
  std::vector<double> standard_errors;
  int n_steps = 0;
  int n_orbits = 0;
  int transient = 0;
  int dropped = 0;  // near-critical orbits
  /// sum of lambdas recomputed from log |det| of the one-step differentials.
  double jacobian_rate = 0.0;
  double sum_check_residual = 0.0;
  double sum_check_se = 0.0;
};

/// Lyapunov spectrum from orbit averages of the cocycle log singular values.
/// Orbit i is an extension orbit of length n_steps ending at sample point i;
/// lambda_j is the mean of (s_j(n) - s_j(n0)) / (n - n0), n0 the transient.
/// Standard errors come from the across-orbit spread.
SpectrumEstimate lyapunov_spectrum(const HomogeneousMap& f, const MeasureSample& sample, int n_steps,
                                   const SpectrumOptions& options = {});

/// Briend-Duval bound lambda_1 >= log(d)/2 and the narrow-spectrum hypothesis
/// lambda_k < 2 lambda_1, both judged with 3 standard errors.
struct BriendDuvalReport {
  double half_log_d = 0.0;
  double bound_margin_se = 0.0;   // (lambda_1 - log(d)/2) / SE_1
  bool bound_pass = false;        // margin >= -3
  double narrow_margin_se = 0.0;  // (2 lambda_1 - lambda_k) / SE
  bool narrow_pass = false;       // margin >= -3
};

BriendDuvalReport briend_duval_check(const SpectrumEstimate& est, int d);

struct MinimalityVerdict {
  bool minimal = false;
  double margin_se = 0.0;  // max_i |lambda_i - log(d)/2| / SE_i
};

/// "minimal" iff every exponent is within 3 SE of log(d)/2.
MinimalityVerdict exponent_minimality_test(const SpectrumEstimate& est, int d);

/// {lambdas, ses, half_log_d, bd_margin, narrow_spectrum_margin, minimality_margin, ...}.
nlohmann::ordered_json spectrum_report(const SpectrumEstimate& est, int d);

/// Floor applied to standard errors before forming margins.
inline constexpr double kStandardErrorFloor = 1e-12;

}  // namespace greenlab

#endif  // GREENLAB_LYAPUNOV_HPP
