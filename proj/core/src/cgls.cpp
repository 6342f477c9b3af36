#include "tvtomo/cgls.hpp"

#include <stdexcept>

namespace tvtomo {

DenseVector cgls_warm_start(const LinearOperator& a, const DenseVector& b, std::size_t iters) {
  if (b.size() != a.rows()) throw std::invalid_argument("cgls_warm_start: dimension mismatch");
  DenseVector x(a.cols(), 0.0);
  DenseVector r = b;  // b - A*0
  DenseVector s = a.apply_adjoint(r);
  DenseVector p = s;
  double gamma = norm2_sq(s);
  for (std::size_t it = 0; it < iters; ++it) {
    if (gamma == 0.0) break;
    const DenseVector q = a.apply(p);
    const double qq = norm2_sq(q);
    if (qq == 0.0) break;
    const double alpha = gamma / qq;
    axpy(alpha, p, x);
    axpy(-alpha, q, r);
    s = a.apply_adjoint(r);
    const double gamma_new = norm2_sq(s);
    const double beta = gamma_new / gamma;
    gamma = gamma_new;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = s[i] + beta * p[i];
  }
  return x;
}

}  // namespace tvtomo
