#ifndef GREENLAB_PROJECTIVE_HPP
#define GREENLAB_PROJECTIVE_HPP

// Points of P^k (k = 1, 2) stored as unit homogeneous vectors, the
// Fubini-Study distance, and the chart family tau_x.

#include <algorithm>
#include <cmath>
#include <optional>

#include "greenlab/core.hpp"

namespace greenlab {

/// A point of P^k: unit-norm representative of a complex line in C^{k+1}.
template <typename Real>
class BasicProjPoint {
 public:
  using Vector = BasicLiftVector<Real>;

  BasicProjPoint() = default;

  /// Wraps an already unit-norm vector without renormalizing.
  static BasicProjPoint from_unit(const Vector& unit) { return BasicProjPoint(unit); }

  const Vector& coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()) - 1; }
  BasicComplex<Real> operator[](int i) const { return coords_[i]; }

 private:
  explicit BasicProjPoint(const Vector& unit) : coords_(unit) {}
  Vector coords_;
};

using ProjPoint = BasicProjPoint<double>;

/// Scales v to unit norm. Throws DomainError for the zero vector.
template <typename Real>
BasicProjPoint<Real> normalize(const BasicLiftVector<Real>& v) {
  const Real n = v.norm();
  if (!(n > Real(0)) || !std::isfinite(static_cast<double>(n))) {
    throw DomainError("normalize: zero or non-finite homogeneous vector");
  }
  return BasicProjPoint<Real>::from_unit(v / n);
}

/// |<x, y>| for unit representatives, clamped to [0, 1].
template <typename Real>
Real projective_overlap(const BasicProjPoint<Real>& x, const BasicProjPoint<Real>& y) {
  return std::min(Real(1), std::abs(x.coords().dot(y.coords())));
}

/// Fubini-Study distance arccos |<x,y>| in [0, pi/2].
template <typename Real>
Real fs_distance(const BasicProjPoint<Real>& x, const BasicProjPoint<Real>& y) {
  // arccos loses half the digits near 1; use the sine of the angle there.
  const Real c = projective_overlap(x, y);
  if (c > Real(0.9)) {
    const auto& a = x.coords();
    const auto& b = y.coords();
    const BasicComplex<Real> phase = a.dot(b);  // conj(a) . b
    const BasicComplex<Real> unit = std::abs(phase) > Real(0) ? phase / std::abs(phase)
                                                              : BasicComplex<Real>(1);
    const Real s = (b - a * unit).norm();  // chord between aligned representatives
    return Real(2) * std::asin(std::min(Real(1), s / Real(2)));
  }
  return std::acos(c);
}

/// True when the two points coincide in P^k within `tol` on |<x,y>|.
template <typename Real>
bool same_point(const BasicProjPoint<Real>& x, const BasicProjPoint<Real>& y, Real tol = Real(1e-10)) {
  return x.dim() == y.dim() && std::abs(projective_overlap(x, y) - Real(1)) < tol;
}

/// Orthonormal frame at a point: tau_x(u) = normalize(center + frame * u).
template <typename Real>
struct BasicChart {
  BasicProjPoint<Real> center;
  BasicFrameMatrix<Real> frame;  // (k+1) x k, columns orthonormal and orthogonal to center
  Real radius_of_validity = Real(0.5);

  int dim() const { return center.dim(); }
};

using Chart = BasicChart<double>;

/// Gram-Schmidt frame at x. Candidate directions are the columns of `basis`
/// (the canonical basis when absent), visited in order, skipping the one most
/// parallel to x. Deterministic for fixed x and basis.
template <typename Real>
BasicChart<Real> chart_at(const BasicProjPoint<Real>& x,
                          const BasicLiftMatrix<Real>* basis = nullptr) {
  const int n = static_cast<int>(x.coords().size());
  const int k = n - 1;
  BasicLiftMatrix<Real> b = basis ? *basis : BasicLiftMatrix<Real>::Identity(n, n);
  int skip = 0;
  Real best = Real(-1);
  for (int j = 0; j < n; ++j) {
    const Real overlap = std::abs(b.col(j).dot(x.coords()));
    if (overlap > best) {
      best = overlap;
      skip = j;
    }
  }
  BasicChart<Real> chart;
  chart.center = x;
  chart.frame.resize(n, k);
  int col = 0;
  for (int j = 0; j < n; ++j) {
    if (j == skip) continue;
    BasicLiftVector<Real> v = b.col(j);
    // Two passes of modified Gram-Schmidt keep orthogonality at roundoff level.
    for (int pass = 0; pass < 2; ++pass) {
      v -= x.coords() * x.coords().dot(v);
      for (int c = 0; c < col; ++c) v -= chart.frame.col(c) * chart.frame.col(c).dot(v);
    }
    chart.frame.col(col++) = v / v.norm();
  }
  return chart;
}

/// tau_x(u) = normalize(center + frame * u).
template <typename Real>
BasicProjPoint<Real> chart_apply(const BasicChart<Real>& chart, const BasicChartVector<Real>& u) {
  return normalize<Real>(chart.center.coords() + chart.frame * u);
}

/// tau_x(exp(log_scale) * direction) without overflowing for huge scales.
template <typename Real>
BasicProjPoint<Real> chart_apply_scaled(const BasicChart<Real>& chart,
                                        const BasicChartVector<Real>& direction, Real log_scale) {
  if (log_scale < Real(30)) return chart_apply(chart, BasicChartVector<Real>(direction * std::exp(log_scale)));
  return normalize<Real>(chart.center.coords() * std::exp(-log_scale) + chart.frame * direction);
}

/// Chart coordinates of p, or nullopt when p lies on the hyperplane at
/// infinity of the chart (<center, p> = 0).
template <typename Real>
std::optional<BasicChartVector<Real>> chart_inverse(const BasicChart<Real>& chart,
                                                    const BasicProjPoint<Real>& p) {
  const BasicComplex<Real> denom = chart.center.coords().dot(p.coords());
  if (std::abs(denom) < Real(1e-300)) return std::nullopt;
  BasicChartVector<Real> u = chart.frame.adjoint() * p.coords();
  u /= denom;
  return u;
}

/// Deterministic quasi-uniform point of P^k (index >= 1): squared moduli
/// uniform on the simplex and phases from Halton coordinates.
ProjPoint quasi_random_point(int dim, std::uint64_t index);

}  // namespace greenlab

#endif  // GREENLAB_PROJECTIVE_HPP
