#include "greenlab/projective.hpp"

#include <utility>

#include "greenlab/random.hpp"

namespace greenlab {

ProjPoint quasi_random_point(int dim, std::uint64_t index) {
  LiftVector x(dim + 1);
  if (dim == 1) {
    const double u = radical_inverse(index, 2);
    x << std::sqrt(u), std::sqrt(1.0 - u) * std::polar(1.0, 2.0 * M_PI * radical_inverse(index, 3));
  } else {
    double u = radical_inverse(index, 2), v = radical_inverse(index, 3);
    if (u > v) std::swap(u, v);
    x << std::sqrt(u), std::sqrt(v - u) * std::polar(1.0, 2.0 * M_PI * radical_inverse(index, 5)),
        std::sqrt(1.0 - v) * std::polar(1.0, 2.0 * M_PI * radical_inverse(index, 7));
  }
  return normalize<double>(x);
}

}  // namespace greenlab
