#ifndef GREENLAB_GREEN_MEASURE_HPP
#define GREENLAB_GREEN_MEASURE_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "greenlab/endomorphism.hpp"

namespace greenlab {

/// Escape-rate Green function of the lift at one point.
struct GreenEvaluation {
  LiftVector point_lift;
  double value = 0.0;  // G(v) = lim d^{-n} log |F^n(v)|
  int iterations = 0;
  double residual = 0.0;  // last increment
};

/// G(v) accumulated with per-step renormalization:
/// G = log|v| + sum_j d^{-j} log |F(u_{j-1})|, u_j = F(u_{j-1}) / |F(u_{j-1})|.
/// Stops once the increment and the geometric tail bound drop below tol;
/// throws NumericError after 200 iterations.
GreenEvaluation green_function(const HomogeneousMap& f, const LiftVector& v, double tol = 1e-12);

enum class SampleMethod { backward_iteration, forward_birkhoff };

std::string to_string(SampleMethod method);
SampleMethod sample_method_from_string(const std::string& name);

/// Seeded batch of points distributed (approximately) by the equilibrium measure.
struct MeasureSample {
  std::string map_label;
  int dim = 1;
  std::vector<ProjPoint> points;
  SampleMethod method = SampleMethod::backward_iteration;
  int burn_in = 30;
  std::uint64_t seed = 0;
  int count = 0;
  int resampled = 0;  // preimage steps redone with a perturbed target
  int skipped_critical = 0;
};

/// Default start of every chain: (1, 0.37+0.21i) for k = 1 and
/// (1, 0.37+0.21i, 0.53-0.17i) for k = 2, normalized.
ProjPoint default_start(int dim);

inline constexpr int kDefaultBurnIn = 30;

/// Backward iteration: burn_in discarded steps from default_start, then
/// `count` consecutive preimages, each chosen uniformly among the d^k with
/// multiplicity. forward_birkhoff re-anchors every 20 steps: it walks the
/// chain 20 preimages further back and emits the forward orbit of that point.
MeasureSample sample_measure(const HomogeneousMap& f, int count, int burn_in, std::uint64_t seed,
                             SampleMethod method = SampleMethod::backward_iteration);

struct MassEstimate {
  double mass = 0.0;
  double standard_error = 0.0;
};

/// Fraction of sample points satisfying the predicate with binomial SE.
/// Requires count >= 100.
MassEstimate empirical_mass(const MeasureSample& sample, const std::function<bool(const ProjPoint&)>& predicate);

/// One smooth test function compared between the sample and its image.
struct InvarianceCheck {
  double mean_sample = 0.0;
  double mean_pushed = 0.0;
  double combined_se = 0.0;
  bool pass = false;
};

/// f_* mu = mu on the sample: averages of n_functions test functions
/// phi_j(x) = |<c_j, x>|^2 (fixed quasi-random unit vectors c_j) over the
/// sample and over f(sample) agree within 3 combined standard errors.
std::vector<InvarianceCheck> pushforward_invariance(const HomogeneousMap& f, const MeasureSample& sample,
                                                   int n_functions = 20);

/// One ball B for the pull-back balance f^* mu = d^k mu.
struct PullbackBall {
  ProjPoint center;
  double radius = 0.0;
  MassEstimate ball;                   // mu(B)
  std::vector<MassEstimate> branches;  // mu(B_i) with its null SE, one per preimage branch
  double worst_deviation_se = 0.0;     // max_i |N_i - N d^{-k}| / sqrt(N d^{-k} (1 - d^{-k}))
  double min_p_value = 1.0;            // smallest per-branch exact binomial p-value
  bool pass = false;
};

/// For n_balls balls centred on sample points: each preimage branch B_i
/// (points p with f(p) in B whose nearest preimage of the centre is c_i)
/// carries d^{-k} of the mass of f^{-1}(B). Given the N points mapped into B
/// the branch counts are multinomial(N, d^{-k}); a ball passes when every
/// branch's exact binomial p-value is at least erfc(3/sqrt 2) / d^k, i.e. the
/// ball as a whole has the false-alarm rate of one 3-sigma test. Few points
/// per branch make the test weak, not wrong.
/// Centres are taken at evenly spaced sample indices, moved forward to the
/// first point whose preimages are at least twice the branch radii
/// radius / sigma_min apart (balls near critical values are skipped).
/// Two-sided exact binomial tail 2 min(P[X <= k], P[X >= k]), X ~ Bin(n, p), capped at 1.
double binomial_two_sided(long n, double p, long k);

std::vector<PullbackBall> pullback_balance(const HomogeneousMap& f, const MeasureSample& sample, int n_balls = 10,
                                           double radius = 0.15);

/// CSV export: '#'-prefixed header lines (map_label, seed, burn_in, method,
/// count), then columns re_0, im_0, ..., re_k, im_k with 17 significant digits.
void write_sample_csv(std::ostream& out, const MeasureSample& sample, const std::string& extra_header = "");

}  // namespace greenlab

#endif  // GREENLAB_GREEN_MEASURE_HPP
