#ifndef GREENLAB_ENDOMORPHISM_HPP
#define GREENLAB_ENDOMORPHISM_HPP

#include <memory>
#include <string>
#include <vector>

#include "greenlab/polynomial.hpp"
#include "greenlab/projective.hpp"
#include "greenlab/random.hpp"

namespace greenlab {

/// How preimages of a point can be computed.
enum class PreimageSolver {
  none,            // no solver (general k = 2 maps)
  binary_form,     // k = 1: roots of b P - a Q
  sym2,            // k = 2 symmetric square of a P^1 map
  diagonal_power,  // k = 2 map [z0^d : z1^d : z2^d]
};

/// A holomorphic endomorphism of P^k of algebraic degree d >= 2, given by
/// k+1 homogeneous polynomials of degree d.
class HomogeneousMap {
 public:
  HomogeneousMap(int dim, int degree, std::vector<HomogeneousPolynomial> components, std::string label);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  const std::string& label() const { return label_; }
  const std::vector<HomogeneousPolynomial>& components() const { return components_; }

  /// Number of preimages counted with multiplicity: d^k.
  long topological_degree() const;

  PreimageSolver solver() const { return solver_; }
  /// The P^1 factor of a symmetric-square map (null otherwise).
  const std::shared_ptr<const HomogeneousMap>& sym2_factor() const { return factor_; }

  void attach_sym2_solver(std::shared_ptr<const HomogeneousMap> factor);
  void attach_diagonal_power_solver();

  /// Polynomial lift F.
  LiftVector lift(const LiftVector& z) const;
  /// Lift and its (k+1)x(k+1) Jacobian.
  LiftVector lift_with_jacobian(const LiftVector& z, LiftMatrix& jacobian) const;

  /// Throws DomainError unless every component is homogeneous of degree d and
  /// the components have no common zero besides the origin.
  void validate() const;

 private:
  int dim_;
  int degree_;
  std::vector<HomogeneousPolynomial> components_;
  std::string label_;
  PreimageSolver solver_ = PreimageSolver::none;
  std::shared_ptr<const HomogeneousMap> factor_;
};

/// f(x) = normalize(F(x)). Throws NumericError if |F(x)| < 1e-14.
ProjPoint eval(const HomogeneousMap& f, const ProjPoint& x);

/// Matrix of d_0 f_x where f_x = tau_y^{-1} o f o tau_x and y ~ f(x):
/// E_y^* DF(X) E_x / <Y, F(X)>. The two-point form lets orbits supplied by
/// a preimage solver use their own stored points as chart centers.
ChartMatrix chart_differential(const HomogeneousMap& f, const Chart& from, const Chart& to);
ChartMatrix chart_differential(const HomogeneousMap& f, const ProjPoint& x,
                               const LiftMatrix* basis = nullptr);

/// sigma_min of the chart differential; zero exactly on the critical set.
double critical_proximity(const HomogeneousMap& f, const ProjPoint& x);

/// All d^k preimages of y with multiplicity. Throws UnsupportedError when the
/// map has no solver. `max_residual` receives the root-finding residual.
std::vector<ProjPoint> preimages(const HomogeneousMap& f, const ProjPoint& y, double* max_residual = nullptr);

/// One preimage chosen uniformly among the d^k (with multiplicity).
ProjPoint random_preimage(const HomogeneousMap& f, const ProjPoint& y, Rng& rng,
                          double* max_residual = nullptr);

/// Log-scaled factorization d_0 f^n_x = left * diag(exp(log_sv)) * right.
struct Cocycle {
  ProjPoint base;
  int length = 0;
  ChartMatrix left;
  ChartMatrix right;
  RealVector log_singular_values;  // ascending
  /// log |det| accumulated step by step (independent of the SVD route).
  double log_abs_det = 0.0;
  bool near_critical = false;

  int dim() const { return static_cast<int>(log_singular_values.size()); }
  /// left * diag(exp(log_sv)) * right; only meaningful for moderate n.
  ChartMatrix matrix() const;
  /// exp(-shift) * matrix(), computed without overflow.
  ChartMatrix scaled_matrix(double shift) const;
  /// Inverse of matrix() applied to u.
  ChartVector solve(const ChartVector& u) const;
};

/// Identity cocycle at x.
Cocycle identity_cocycle(const ProjPoint& x);

/// Multiplies a one-step differential onto the cocycle and refactorizes.
void extend_cocycle(Cocycle& c, const ChartMatrix& step);

/// Threshold on sigma_min of a single step below which an orbit is flagged.
inline constexpr double kNearCriticalThreshold = 1e-12;

/// Orbit segment x_0, ..., x_n with f(x_i) ~ x_{i+1}.
struct Orbit {
  std::vector<ProjPoint> points;
  int length() const { return static_cast<int>(points.size()) - 1; }
};

/// Forward orbit by repeated eval.
Orbit forward_orbit(const HomogeneousMap& f, const ProjPoint& x, int n);

/// Orbit segment of length n ending at y, built from n random preimages
/// (a finite piece of a backward orbit of the natural extension, read
/// forwards). Keeps orbits on repelling Julia sets where forward iteration
/// would drift off in floating point.
Orbit extension_orbit(const HomogeneousMap& f, const ProjPoint& y, int n, Rng& rng);

/// d_0 f^n_x along the orbit (n = orbit.length()), refactorized every step.
Cocycle cocycle_along(const HomogeneousMap& f, const Orbit& orbit, const LiftMatrix* basis = nullptr);

/// Prefix cocycles c[0..n] along the orbit (c[m] = d_0 f^m_{x_0}).
std::vector<Cocycle> cocycle_prefixes(const HomogeneousMap& f, const Orbit& orbit,
                                      const LiftMatrix* basis = nullptr);

/// d_0 f^n_x along the forward orbit of x.
Cocycle cocycle(const HomogeneousMap& f, const ProjPoint& x, int n, const LiftMatrix* basis = nullptr);

/// log |J_0 f^n_x|^2 = 2 * sum of log singular values.
double log_jacobian_sq(const Cocycle& c);

}  // namespace greenlab

#endif  // GREENLAB_ENDOMORPHISM_HPP
