#ifndef GREENLAB_POLYNOMIAL_HPP
#define GREENLAB_POLYNOMIAL_HPP

#include <array>
#include <vector>

#include "greenlab/core.hpp"
#include "greenlab/random.hpp"

namespace greenlab {

using Exponents = std::array<int, kMaxLift>;

/// All exponent vectors of total degree `degree` in `nvars` variables, in the
/// fixed order used by dense coefficient arrays: lexicographically decreasing
/// (x0^d first, x_{nvars-1}^d last).
std::vector<Exponents> monomials(int nvars, int degree);

/// Position of an exponent vector in monomials(nvars, degree), or -1.
int monomial_index(int nvars, int degree, const Exponents& e);

/// A homogeneous polynomial with a dense coefficient array.
class HomogeneousPolynomial {
 public:
  HomogeneousPolynomial() = default;
  HomogeneousPolynomial(int nvars, int degree);

  int nvars() const { return nvars_; }
  int degree() const { return degree_; }
  const std::vector<Exponents>& exponents() const { return *exponents_; }
  std::vector<Complex>& coefficients() { return coeffs_; }
  const std::vector<Complex>& coefficients() const { return coeffs_; }

  Complex& coefficient(const Exponents& e);
  Complex coefficient(const Exponents& e) const;

  Complex eval(const LiftVector& z) const;
  /// Value and gradient in one pass.
  Complex eval_with_gradient(const LiftVector& z, LiftVector& gradient) const;

  double max_abs_coefficient() const;

 private:
  int nvars_ = 0;
  int degree_ = 0;
  const std::vector<Exponents>* exponents_ = nullptr;  // shared, interned per (nvars, degree)
  std::vector<Complex> coeffs_;
};

/// Roots in P^1 of a binary form sum_i h[i] x^i w^(d-i), counted with
/// multiplicity (always exactly d points). Companion-matrix eigenvalues in the
/// better-conditioned affine chart plus one Newton step per root; roots lost
/// to a vanishing leading coefficient are returned at that chart's infinity.
/// `max_residual` receives the largest normalized residual |H(r)| / max|h|.
std::vector<LiftVector> binary_form_roots(const std::vector<Complex>& h, double* max_residual = nullptr);

/// Resultant of two binary forms of equal degree (Sylvester determinant),
/// normalized by max|p|^d max|q|^d.
double normalized_resultant(const std::vector<Complex>& p, const std::vector<Complex>& q);

}  // namespace greenlab

#endif  // GREENLAB_POLYNOMIAL_HPP
