#include "greenlab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace greenlab {

namespace {

void enumerate(int nvars, int var, int remaining, Exponents& current, std::vector<Exponents>& out) {
  if (var == nvars - 1) {
    current[var] = remaining;
    out.push_back(current);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[var] = e;
    enumerate(nvars, var + 1, remaining - e, current, out);
  }
}

const std::vector<Exponents>& interned_monomials(int nvars, int degree) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<std::vector<Exponents>>> table;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = table[{nvars, degree}];
  if (!slot) slot = std::make_unique<std::vector<Exponents>>(monomials(nvars, degree));
  return *slot;
}

using DynMatrix = Eigen::MatrixXcd;

Complex horner(const std::vector<Complex>& p, Complex z, Complex* derivative) {
  Complex value = 0.0, d = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    d = d * z + value;
    value = value * z + *it;
  }
  if (derivative) *derivative = d;
  return value;
}

// Roots of sum_i p[i] z^i with p.back() != 0, polished by one Newton step.
std::vector<Complex> affine_roots(const std::vector<Complex>& p) {
  const int m = static_cast<int>(p.size()) - 1;
  std::vector<Complex> roots;
  if (m <= 0) return roots;
  if (m == 1) {
    roots.push_back(-p[0] / p[1]);
    return roots;
  }
  DynMatrix companion = DynMatrix::Zero(m, m);
  for (int i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < m; ++i) companion(i, m - 1) = -p[i] / p[m];
  Eigen::ComplexEigenSolver<DynMatrix> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw NumericError("companion eigenvalue iteration failed");
  for (int i = 0; i < m; ++i) {
    Complex z = solver.eigenvalues()[i];
    Complex dp;
    const Complex v = horner(p, z, &dp);
    if (std::abs(dp) > 0.0) {
      const Complex candidate = z - v / dp;
      if (std::abs(horner(p, candidate, nullptr)) <= std::abs(v)) z = candidate;
    }
    roots.push_back(z);
  }
  return roots;
}

}  // namespace

std::vector<Exponents> monomials(int nvars, int degree) {
  std::vector<Exponents> out;
  Exponents current{};
  enumerate(nvars, 0, degree, current, out);
  return out;
}

int monomial_index(int nvars, int degree, const Exponents& e) {
  const auto& list = interned_monomials(nvars, degree);
  for (std::size_t i = 0; i < list.size(); ++i) {
    bool same = true;
    for (int j = 0; j < nvars; ++j) same = same && list[i][j] == e[j];
    if (same) return static_cast<int>(i);
  }
  return -1;
}

HomogeneousPolynomial::HomogeneousPolynomial(int nvars, int degree)
    : nvars_(nvars), degree_(degree), exponents_(&interned_monomials(nvars, degree)) {
  if (nvars < 2 || nvars > kMaxLift || degree < 0) {
    throw DomainError("homogeneous polynomial: unsupported variable count or degree");
  }
  coeffs_.assign(exponents_->size(), Complex(0.0));
}

Complex& HomogeneousPolynomial::coefficient(const Exponents& e) {
  const int i = monomial_index(nvars_, degree_, e);
  if (i < 0) throw DomainError("monomial is not of the polynomial's degree");
  return coeffs_[i];
}

Complex HomogeneousPolynomial::coefficient(const Exponents& e) const {
  const int i = monomial_index(nvars_, degree_, e);
  if (i < 0) throw DomainError("monomial is not of the polynomial's degree");
  return coeffs_[i];
}

Complex HomogeneousPolynomial::eval(const LiftVector& z) const {
  Complex powers[kMaxLift][16];
  for (int j = 0; j < nvars_; ++j) {
    powers[j][0] = 1.0;
    for (int e = 1; e <= degree_; ++e) powers[j][e] = powers[j][e - 1] * z[j];
  }
  Complex sum = 0.0;
  const auto& exps = *exponents_;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == Complex(0.0)) continue;
    Complex term = coeffs_[i];
    for (int j = 0; j < nvars_; ++j) term *= powers[j][exps[i][j]];
    sum += term;
  }
  return sum;
}

Complex HomogeneousPolynomial::eval_with_gradient(const LiftVector& z, LiftVector& gradient) const {
  Complex powers[kMaxLift][16];
  for (int j = 0; j < nvars_; ++j) {
    powers[j][0] = 1.0;
    for (int e = 1; e <= degree_; ++e) powers[j][e] = powers[j][e - 1] * z[j];
  }
  gradient.setZero(nvars_);
  Complex sum = 0.0;
  const auto& exps = *exponents_;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == Complex(0.0)) continue;
    const auto& e = exps[i];
    Complex term = coeffs_[i];
    for (int j = 0; j < nvars_; ++j) term *= powers[j][e[j]];
    sum += term;
    for (int j = 0; j < nvars_; ++j) {
      if (e[j] == 0) continue;
      Complex partial = coeffs_[i] * static_cast<double>(e[j]);
      for (int l = 0; l < nvars_; ++l) partial *= powers[l][l == j ? e[l] - 1 : e[l]];
      gradient[j] += partial;
    }
  }
  return sum;
}

double HomogeneousPolynomial::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

std::vector<LiftVector> binary_form_roots(const std::vector<Complex>& h, double* max_residual) {
  const int d = static_cast<int>(h.size()) - 1;
  double hmax = 0.0;
  for (const auto& c : h) hmax = std::max(hmax, std::abs(c));
  if (d < 1 || !(hmax > 0.0)) throw DomainError("binary form is identically zero");
  const double cutoff = 1e-14 * hmax;

  // z = x/w when the x^d coefficient dominates, t = w/x otherwise.
  const bool z_chart = std::abs(h[d]) >= std::abs(h[0]);
  std::vector<Complex> p(d + 1);
  for (int j = 0; j <= d; ++j) p[j] = z_chart ? h[j] : h[d - j];
  int m = d;
  while (m > 0 && std::abs(p[m]) <= cutoff) --m;
  p.resize(m + 1);

  std::vector<LiftVector> roots;
  roots.reserve(d);
  for (const Complex& r : affine_roots(p)) {
    LiftVector v(2);
    if (z_chart) v << r, 1.0;
    else v << 1.0, r;
    roots.push_back(v / v.norm());
  }
  for (int i = m; i < d; ++i) {
    LiftVector v(2);
    if (z_chart) v << 1.0, 0.0;
    else v << 0.0, 1.0;
    roots.push_back(v);
  }

  if (max_residual) {
    double worst = 0.0;
    for (const auto& r : roots) {
      Complex value = 0.0;
      for (int i = 0; i <= d; ++i) value += h[i] * std::pow(r[0], i) * std::pow(r[1], d - i);
      worst = std::max(worst, std::abs(value) / hmax);
    }
    *max_residual = worst;
  }
  return roots;
}

double normalized_resultant(const std::vector<Complex>& p, const std::vector<Complex>& q) {
  const int d = static_cast<int>(p.size()) - 1;
  if (static_cast<int>(q.size()) - 1 != d || d < 1) throw DomainError("resultant: degree mismatch");
  double pm = 0.0, qm = 0.0;
  for (int i = 0; i <= d; ++i) {
    pm = std::max(pm, std::abs(p[i]));
    qm = std::max(qm, std::abs(q[i]));
  }
  if (pm == 0.0 || qm == 0.0) return 0.0;
  DynMatrix s = DynMatrix::Zero(2 * d, 2 * d);
  for (int row = 0; row < d; ++row) {
    for (int i = 0; i <= d; ++i) {
      s(row, row + i) = p[d - i] / pm;
      s(row + d, row + i) = q[d - i] / qm;
    }
  }
  return std::abs(s.partialPivLu().determinant());
}

}  // namespace greenlab
