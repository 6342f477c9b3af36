#include "tvtomo/linear_operator.hpp"

#include <cmath>
#include <stdexcept>

#include "tvtomo/rng.hpp"

namespace tvtomo {

double power_iter_norm_sq(const LinearOperator& a, std::size_t iters, std::uint64_t seed) {
  if (a.cols() == 0) throw std::invalid_argument("power_iter_norm_sq: empty operator");
  Rng rng(seed);
  DenseVector v(a.cols());
  for (double& x : v) x = rng.uniform_pm1();
  const double nv = norm2(v);
  if (nv == 0.0) v[0] = 1.0;  // astronomically unlikely; any unit vector works
  else scale(v, 1.0 / nv);

  double lambda = 0.0;
  for (std::size_t it = 0; it < iters; ++it) {
    DenseVector w = a.apply(v);
    lambda = norm2_sq(w);  // Rayleigh quotient of A^T A at unit v
    if (lambda == 0.0) return 0.0;
    v = a.apply_adjoint(w);
    const double n = norm2(v);
    if (n == 0.0) return lambda;
    scale(v, 1.0 / n);
  }
  return lambda;
}

}  // namespace tvtomo
