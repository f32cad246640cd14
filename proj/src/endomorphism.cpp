#include "greenlab/endomorphism.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace greenlab {

namespace {

// Singular values of a 1x1 or 2x2 matrix, (min, max), in closed form.
std::pair<double, double> extreme_singular_values(const ChartMatrix& a) {
  if (a.rows() == 1) {
    const double s = std::abs(a(0, 0));
    return {s, s};
  }
  const double t = a.squaredNorm();
  const double det = std::abs(a.determinant());
  const double disc = std::sqrt(std::max(0.0, t * t - 4.0 * det * det));
  const double big = std::sqrt((t + disc) / 2.0);
  const double small = (t + disc) > 0.0 ? std::sqrt(2.0 * det * det / (t + disc)) : 0.0;
  return {small, big};
}

std::vector<Complex> binary_coefficients(const HomogeneousPolynomial& p) {
  std::vector<Complex> h(p.degree() + 1, Complex(0.0));
  const auto& exps = p.exponents();
  for (std::size_t i = 0; i < exps.size(); ++i) h[exps[i][0]] = p.coefficients()[i];
  return h;
}

std::vector<LiftVector> p1_preimages(const HomogeneousMap& g, const LiftVector& y, double* residual) {
  const auto hp = binary_coefficients(g.components()[0]);
  const auto hq = binary_coefficients(g.components()[1]);
  std::vector<Complex> h(hp.size());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = y[1] * hp[i] - y[0] * hq[i];
  return binary_form_roots(h, residual);
}

}  // namespace

HomogeneousMap::HomogeneousMap(int dim, int degree, std::vector<HomogeneousPolynomial> components,
                               std::string label)
    : dim_(dim), degree_(degree), components_(std::move(components)), label_(std::move(label)) {
  if (dim_ < 1 || dim_ > kMaxDim) throw DomainError("map dimension must be 1 or 2");
  if (degree_ < 2 || degree_ > 15) throw DomainError("map degree must lie in [2, 15]");
  if (static_cast<int>(components_.size()) != dim_ + 1) {
    throw DomainError("map needs k+1 components");
  }
  if (dim_ == 1) solver_ = PreimageSolver::binary_form;
}

long HomogeneousMap::topological_degree() const {
  long n = 1;
  for (int i = 0; i < dim_; ++i) n *= degree_;
  return n;
}

void HomogeneousMap::attach_sym2_solver(std::shared_ptr<const HomogeneousMap> factor) {
  if (dim_ != 2 || !factor || factor->dim() != 1 || factor->degree() != degree_) {
    throw DomainError("symmetric-square solver needs a P^1 factor of the same degree");
  }
  factor_ = std::move(factor);
  solver_ = PreimageSolver::sym2;
}

void HomogeneousMap::attach_diagonal_power_solver() {
  if (dim_ != 2) throw DomainError("diagonal power solver is for P^2 maps");
  solver_ = PreimageSolver::diagonal_power;
}

LiftVector HomogeneousMap::lift(const LiftVector& z) const {
  LiftVector out(dim_ + 1);
  for (int i = 0; i <= dim_; ++i) out[i] = components_[i].eval(z);
  return out;
}

LiftVector HomogeneousMap::lift_with_jacobian(const LiftVector& z, LiftMatrix& jacobian) const {
  LiftVector out(dim_ + 1);
  jacobian.resize(dim_ + 1, dim_ + 1);
  LiftVector grad;
  for (int i = 0; i <= dim_; ++i) {
    out[i] = components_[i].eval_with_gradient(z, grad);
    jacobian.row(i) = grad.transpose();
  }
  return out;
}

void HomogeneousMap::validate() const {
  double cmax = 0.0;
  for (const auto& p : components_) {
    if (p.nvars() != dim_ + 1 || p.degree() != degree_) {
      throw DomainError("component is not homogeneous of the map's degree in k+1 variables");
    }
    for (const auto& c : p.coefficients()) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw DomainError("non-finite coefficient");
    }
    if (p.max_abs_coefficient() == 0.0) throw DomainError("identically zero component");
    cmax = std::max(cmax, p.max_abs_coefficient());
  }
  if (dim_ == 1) {
    const double res =
        normalized_resultant(binary_coefficients(components_[0]), binary_coefficients(components_[1]));
    if (!(res > 1e-10)) throw DomainError("degenerate map: components share a common zero (resultant ~ 0)");
    return;
  }
  // Scan a quasi-random net, then polish the smallest values of |F| on the
  // unit sphere with damped Gauss-Newton in the tangent chart.
  std::vector<std::pair<double, ProjPoint>> best;
  for (std::uint64_t i = 1; i <= 10000; ++i) {
    const ProjPoint x = quasi_random_point(2, i);
    best.emplace_back(lift(x.coords()).norm(), x);
  }
  std::partial_sort(best.begin(), best.begin() + 32, best.end(),
                    [](const auto& a, const auto& b) { return a.first < b.first; });
  best.resize(32);
  for (auto [m, x] : best) {
    for (int it = 0; it < 60 && m >= 1e-10 * cmax; ++it) {
      const Chart c = chart_at(x);
      LiftVector value(3), grad(3);
      LiftMatrix jac(3, 3);
      for (int r = 0; r < 3; ++r) {
        value[r] = components_[r].eval_with_gradient(x.coords(), grad);
        jac.row(r) = grad.transpose();
      }
      const LiftMatrix jt = jac * c.frame;
      const LiftVector step = jt.colPivHouseholderQr().solve(-value);
      double t = 1.0;
      for (; t > 1e-6; t *= 0.5) {
        const ProjPoint y = normalize<double>(LiftVector(x.coords() + t * (c.frame * step)));
        const double my = lift(y.coords()).norm();
        if (my < m) {
          x = y;
          m = my;
          break;
        }
      }
      if (t <= 1e-6) break;
    }
    if (m < 1e-10 * cmax) throw DomainError("degenerate map: components vanish simultaneously at a point of P^2");
  }
}

ProjPoint eval(const HomogeneousMap& f, const ProjPoint& x) {
  const LiftVector y = f.lift(x.coords());
  if (!(y.norm() >= 1e-14)) throw NumericError("eval: lift vanishes (degenerate map)");
  return normalize<double>(y);
}

ChartMatrix chart_differential(const HomogeneousMap& f, const Chart& from, const Chart& to) {
  LiftMatrix jac;
  const LiftVector image = f.lift_with_jacobian(from.center.coords(), jac);
  const Complex denom = to.center.coords().dot(image);
  ChartMatrix a = to.frame.adjoint() * jac * from.frame;
  return a / denom;
}

ChartMatrix chart_differential(const HomogeneousMap& f, const ProjPoint& x, const LiftMatrix* basis) {
  return chart_differential(f, chart_at(x, basis), chart_at(eval(f, x), basis));
}

double critical_proximity(const HomogeneousMap& f, const ProjPoint& x) {
  return extreme_singular_values(chart_differential(f, x)).first;
}

std::vector<ProjPoint> preimages(const HomogeneousMap& f, const ProjPoint& y, double* max_residual) {
  std::vector<ProjPoint> out;
  double residual = 0.0;
  switch (f.solver()) {
    case PreimageSolver::binary_form: {
      for (const auto& r : p1_preimages(f, y.coords(), &residual)) out.push_back(ProjPoint::from_unit(r));
      break;
    }
    case PreimageSolver::sym2: {
      // y = [ac : ad+bc : bd] is the pair of roots of z2 x^2 - z1 x w + z0 w^2.
      const auto& z = y.coords();
      double r0 = 0.0, r1 = 0.0, r2 = 0.0;
      const auto pair = binary_form_roots({z[0], -z[1], z[2]}, &r0);
      const auto first = p1_preimages(*f.sym2_factor(), pair[0], &r1);
      const auto second = p1_preimages(*f.sym2_factor(), pair[1], &r2);
      residual = std::max({r0, r1, r2});
      for (const auto& p : first) {
        for (const auto& q : second) {
          LiftVector v(3);
          v << p[0] * q[0], p[0] * q[1] + p[1] * q[0], p[1] * q[1];
          out.push_back(normalize<double>(v));
        }
      }
      break;
    }
    case PreimageSolver::diagonal_power: {
      const int d = f.degree();
      const auto& z = y.coords();
      LiftVector root(3);
      for (int j = 0; j < 3; ++j) root[j] = std::pow(z[j], 1.0 / d);
      for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
          LiftVector v(3);
          v << root[0] * std::polar(1.0, 2.0 * M_PI * a / d), root[1] * std::polar(1.0, 2.0 * M_PI * b / d),
              root[2];
          out.push_back(normalize<double>(v));
        }
      }
      break;
    }
    case PreimageSolver::none:
      throw UnsupportedError("map '" + f.label() + "' has no preimage solver");
  }
  if (max_residual) *max_residual = residual;
  return out;
}

ProjPoint random_preimage(const HomogeneousMap& f, const ProjPoint& y, Rng& rng, double* max_residual) {
  const auto all = preimages(f, y, max_residual);
  return all[uniform_index(rng, all.size())];
}

ChartMatrix Cocycle::matrix() const { return scaled_matrix(0.0); }

ChartMatrix Cocycle::scaled_matrix(double shift) const {
  const int k = dim();
  ChartMatrix d = ChartMatrix::Zero(k, k);
  for (int i = 0; i < k; ++i) d(i, i) = std::exp(log_singular_values[i] - shift);
  return left * d * right;
}

ChartVector Cocycle::solve(const ChartVector& u) const {
  ChartVector v = left.adjoint() * u;
  for (int i = 0; i < dim(); ++i) v[i] *= std::exp(-log_singular_values[i]);
  return right.adjoint() * v;
}

Cocycle identity_cocycle(const ProjPoint& x) {
  const int k = x.dim();
  Cocycle c;
  c.base = x;
  c.left = ChartMatrix::Identity(k, k);
  c.right = ChartMatrix::Identity(k, k);
  c.log_singular_values = RealVector::Zero(k);
  return c;
}

void extend_cocycle(Cocycle& c, const ChartMatrix& step) {
  if (c.near_critical) {
    ++c.length;
    return;
  }
  const auto [smin, smax_step] = extreme_singular_values(step);
  (void)smax_step;
  if (!(smin >= kNearCriticalThreshold)) {
    c.near_critical = true;
    ++c.length;
    return;
  }
  const int k = c.dim();
  c.log_abs_det += std::log(std::abs(step.determinant()));
  if (k == 1) {
    const Complex a = step(0, 0);
    c.left(0, 0) *= a / std::abs(a);
    c.log_singular_values[0] += std::log(std::abs(a));
    ++c.length;
    return;
  }
  const double top = c.log_singular_values.maxCoeff();
  ChartMatrix scaled = step * c.left;
  for (int j = 0; j < k; ++j) scaled.col(j) *= std::exp(c.log_singular_values[j] - top);
  Eigen::JacobiSVD<ChartMatrix> svd(scaled, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();  // descending
  const ChartMatrix new_right = svd.matrixV().adjoint() * c.right;
  RealVector logs(k);
  logs[k - 1] = top + std::log(sv[0]);
  // The SVD resolves the small singular value to roughly eps * sv[0]; past a
  // 1e-8 spread the determinant route is the accurate one.
  if (sv[k - 1] > 1e-8 * sv[0]) logs[0] = top + std::log(sv[k - 1]);
  else logs[0] = c.log_abs_det - logs[k - 1];
  ChartMatrix left(k, k), right(k, k);
  for (int i = 0; i < k; ++i) {
    left.col(i) = svd.matrixU().col(k - 1 - i);
    right.row(i) = new_right.row(k - 1 - i);
  }
  c.left = left;
  c.right = right;
  c.log_singular_values = logs;
  ++c.length;
}

Orbit forward_orbit(const HomogeneousMap& f, const ProjPoint& x, int n) {
  Orbit orbit;
  orbit.points.reserve(n + 1);
  orbit.points.push_back(x);
  for (int i = 0; i < n; ++i) orbit.points.push_back(eval(f, orbit.points.back()));
  return orbit;
}

Orbit extension_orbit(const HomogeneousMap& f, const ProjPoint& y, int n, Rng& rng) {
  Orbit orbit;
  orbit.points.resize(n + 1);
  orbit.points[n] = y;
  for (int i = n - 1; i >= 0; --i) {
    double residual = 0.0;
    orbit.points[i] = random_preimage(f, orbit.points[i + 1], rng, &residual);
    if (residual > 1e-8) warn("extension orbit: preimage residual " + std::to_string(residual));
  }
  return orbit;
}

std::vector<Cocycle> cocycle_prefixes(const HomogeneousMap& f, const Orbit& orbit, const LiftMatrix* basis) {
  std::vector<Cocycle> out;
  out.reserve(orbit.points.size());
  Cocycle c = identity_cocycle(orbit.points.front());
  out.push_back(c);
  Chart from = chart_at(orbit.points.front(), basis);
  for (int i = 0; i < orbit.length(); ++i) {
    Chart to = chart_at(orbit.points[i + 1], basis);
    extend_cocycle(c, chart_differential(f, from, to));
    out.push_back(c);
    from = std::move(to);
  }
  return out;
}

Cocycle cocycle_along(const HomogeneousMap& f, const Orbit& orbit, const LiftMatrix* basis) {
  Cocycle c = identity_cocycle(orbit.points.front());
  Chart from = chart_at(orbit.points.front(), basis);
  for (int i = 0; i < orbit.length(); ++i) {
    Chart to = chart_at(orbit.points[i + 1], basis);
    extend_cocycle(c, chart_differential(f, from, to));
    from = std::move(to);
  }
  return c;
}

Cocycle cocycle(const HomogeneousMap& f, const ProjPoint& x, int n, const LiftMatrix* basis) {
  if (n < 0) throw DomainError("cocycle length must be nonnegative");
  return cocycle_along(f, forward_orbit(f, x, n), basis);
}

double log_jacobian_sq(const Cocycle& c) { return 2.0 * c.log_singular_values.sum(); }

}  // namespace greenlab
