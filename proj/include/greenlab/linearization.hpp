#ifndef GREENLAB_LINEARIZATION_HPP
#define GREENLAB_LINEARIZATION_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "greenlab/green_measure.hpp"

namespace greenlab {

/// Target radius of the renormalized maps, in chart units.
inline constexpr double kR0 = 0.3;
/// Quasi-random points of B(0, rho) used by the injectivity test.
inline constexpr int kMembershipGrid = 200;
inline constexpr double kInjectivityMargin = 1e-3;

/// Deterministic quasi-uniform points of the complex ball B(0, radius) in C^k.
/// With include_origin the first point is 0.
std::vector<ChartVector> ball_grid(int k, double radius, int count, bool include_origin = false);

/// Diagnostics of Psi_n = f^n_x o (d_0 f^n_x)^{-1} on the grid of B(0, rho).
struct BallImage {
  double max_image_norm = 0.0;  // max |Psi_n(u)| in the chart at f^n(x); inf if undefined
  double min_ratio = 0.0;       // min |Psi_n(u) - Psi_n(v)| / |u - v| over pairs
  bool in_B = false;
};

/// Evaluates Psi_n along orbit[0..n] with the prefix cocycle c (length n).
/// The lift is iterated in homogeneous coordinates, so no chart re-centering
/// is needed along the way. One-sided: points near the boundary of B_n may be
/// reported outside.
BallImage b_membership(const HomogeneousMap& f, const Orbit& orbit, const Cocycle& c, double rho);

struct MembershipRecord {
  ProjPoint point;
  int n = 0;
  double rho = 0.0, tau = 0.0, nu = 0.0;
  bool in_B = false;
  bool in_LB = false;
  bool in_V = false;
  double sigma_max_inv = 0.0;  // exp(-min log singular value)
  double log_jac_ratio = 0.0;  // log |J|^2 - k n log d
  double min_ratio = 0.0;
  double max_image_norm = 0.0;
};

/// in_LB: in_B and ||(d_0 f^n_x)^{-1}|| <= tau d^{-n/2} (compared in log space).
bool lb_condition(const Cocycle& c, int d, double tau);
/// in_V: |log |J_0 f^n_x|^2 - k n log d| <= 2 log(1/nu).
bool v_condition(const Cocycle& c, int d, double nu);

/// All three memberships of x = orbit[0] at n = c.length.
MembershipRecord membership(const HomogeneousMap& f, const Orbit& orbit, const Cocycle& c, double rho, double tau,
                            double nu);

struct MassRow {
  int n = 0;
  MassEstimate b, lb, v;
};

struct MassCurve {
  double rho = 0.0, tau = 0.0, nu = 0.0;
  std::vector<MassRow> rows;
};

/// Pointwise inclusion/monotonicity violations found while building curves.
struct InclusionCounts {
  long evaluated = 0;
  long lb_not_in_b = 0;
  long rho_monotonicity = 0;  // in B at rho but not at a smaller rho
  /// Single-grid oracle results that were in B at rho but not at a smaller
  /// rho before combining grids (false positives of the coarser grid).
  long rho_grid_disagreements = 0;
  long tau_monotonicity = 0;  // in LB at tau but not at a larger tau
  long nu_monotonicity = 0;   // in V at nu but not at a smaller nu
};

struct MassCurveOptions {
  int n_min = 0;
  int n_max = 12;
  std::vector<double> rhos{0.2, 0.1, 0.05, 0.02};
  std::vector<double> taus{2.0, 10.0, 50.0};
  std::vector<double> nus{0.5, 0.3, 0.1};
  std::uint64_t seed = 0;
  /// Sample points used (0: all).
  int max_points = 0;
};

struct MassCurves {
  std::vector<MassCurve> curves;  // one per (rho, tau, nu), grid order
  InclusionCounts inclusions;
};

/// Empirical mu-masses of B_n(rho), LB_n(rho, tau), V_n(nu) for n in
/// [n_min, n_max]. Point i is the start of an extension orbit of length n_max
/// ending at sample point i (seed derived per point). A point counts as in
/// B_n(rho) when no grid at a configured radius <= rho finds a witness
/// against it.
MassCurves mass_curves(const HomogeneousMap& f, const MeasureSample& sample, const MassCurveOptions& options);

/// CSV: n, mass_B, se_B, mass_LB, se_LB, mass_V, se_V.
void write_mass_curve_csv(std::ostream& out, const MassCurve& curve, const std::string& header = "");

struct DistortionEntry {
  double condition = 1.0;  // delta_k / delta_1 of (d_0 f^n_x)^{-1}
  bool in_LB = false;
  bool in_V = false;
  /// For LB and V points: condition <= tau^k / nu (1 + slack).
  bool sandwich_ok = true;
};

struct DistortionProfile {
  int n = 0;
  double tau = 0.0, nu = 0.0, slack = 0.1;
  std::vector<DistortionEntry> entries;
  long checked = 0;     // points in LB and V
  long violations = 0;  // of the sandwich bound
  double max_condition_checked = 0.0;
};

DistortionProfile distortion_profile(const HomogeneousMap& f, const MeasureSample& sample, int n, double rho,
                                     double tau, double nu, std::uint64_t seed = 0, int max_points = 0,
                                     double slack = 0.1);

enum class TraceVerdict { converging, diverging, inconclusive };
std::string to_string(TraceVerdict v);

struct RenormalizationTrace {
  ProjPoint point;
  std::vector<int> subsequence;
  std::vector<double> sup_deviation;  // between consecutive entries of subsequence
  double recurrence_radius = 0.0;
  double ball_radius = 0.0;
  int candidates = 0;
  TraceVerdict verdict = TraceVerdict::inconclusive;
  std::string reason;
};

struct SqrtDOptions {
  int grid_points = 100;
  double converge_tol = 1e-3;
  int max_chain = 8;
};

/// sqrt(d)-linearizability test along orbit[0..max_n], x = orbit[0].
/// Recurrence times n <= max_n with fs_distance(x_n, x) < recurrence_radius
/// are candidates; Psi'_n = f^n o tau_x o (d^{-n/2} Id) is evaluated on a grid
/// of B(0, ball_radius). The last steps x_m -> x_n are iterated nonlinearly,
/// as many as keep the roundoff amplification below 1e10; the first m go
/// through the cocycle and must hand over a chart vector below 1e-6. A
/// candidate where both cannot hold is unresolved: it counts as leaving
/// B(0, R0) and is left out of the convergence search (a bounded limit needs
/// bounded derivatives at 0, which it already violates).
/// converging: a chain of >= 3 candidates with strictly decreasing grid
/// deviations ending below converge_tol. diverging: consecutive candidates
/// where an image leaves B(0, R0) in the chart at x and the linearized
/// diameter 2 r exp(s_max - n log(d)/2) at least doubles. Only this one
/// subsequence is examined, so "diverging" does not refute linearizability
/// along other extractions.
RenormalizationTrace sqrt_d_linearization_test(const HomogeneousMap& f, const Orbit& orbit, int max_n,
                                               double ball_radius, double recurrence_radius,
                                               const SqrtDOptions& options = {});

/// Same, along the forward orbit of x.
RenormalizationTrace sqrt_d_linearization_test(const HomogeneousMap& f, const ProjPoint& x, int max_n,
                                               double ball_radius, double recurrence_radius,
                                               const SqrtDOptions& options = {});

nlohmann::ordered_json trace_json(const RenormalizationTrace& trace);

}  // namespace greenlab

#endif  // GREENLAB_LINEARIZATION_HPP
