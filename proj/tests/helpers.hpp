#ifndef GREENLAB_TEST_HELPERS_HPP
#define GREENLAB_TEST_HELPERS_HPP

#include <cmath>
#include <initializer_list>
#include <utility>
#include <vector>

#include "greenlab/endomorphism.hpp"

namespace testing {

using greenlab::Complex;
using greenlab::Exponents;
using greenlab::HomogeneousMap;
using greenlab::HomogeneousPolynomial;
using greenlab::LiftVector;
using greenlab::ProjPoint;

using Term = std::pair<Exponents, Complex>;

inline HomogeneousMap make_map(int k, int d, std::initializer_list<std::initializer_list<Term>> comps,
                               const char* label = "test") {
  std::vector<HomogeneousPolynomial> polys;
  for (const auto& terms : comps) {
    HomogeneousPolynomial p(k + 1, d);
    for (const auto& [e, c] : terms) p.coefficient(e) = c;
    polys.push_back(std::move(p));
  }
  return HomogeneousMap(k, d, std::move(polys), label);
}

inline ProjPoint point(std::initializer_list<Complex> c) {
  LiftVector v(static_cast<int>(c.size()));
  int i = 0;
  for (Complex z : c) v[i++] = z;
  return greenlab::normalize<double>(v);
}

// Affine coordinate z/w of a point of P^1.
inline Complex affine(const ProjPoint& p) { return p[0] / p[1]; }

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

}  // namespace testing

#endif
