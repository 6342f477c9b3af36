#include "tvtomo/diff_operator.hpp"

#include <stdexcept>

namespace tvtomo {

DiffOperator::DiffOperator(std::size_t m, std::size_t n, std::size_t l) : m_(m), n_(n), l_(l) {
  if (m == 0 || n == 0 || l == 0) throw std::invalid_argument("DiffOperator: dimensions must be positive");
}

DenseVector DiffOperator::apply(const DenseVector& x) const {
  if (x.size() != vol_size()) throw std::invalid_argument("apply_D: dimension mismatch");
  DenseVector u(out_size());
  std::size_t v = 0;
  for (std::size_t k = 0; k < l_; ++k) {
    const std::size_t kp = (k + 1 == l_) ? 0 : k + 1;
    for (std::size_t j = 0; j < n_; ++j) {
      const std::size_t jp = (j + 1 == n_) ? 0 : j + 1;
      for (std::size_t i = 0; i < m_; ++i, ++v) {
        const std::size_t ip = (i + 1 == m_) ? 0 : i + 1;
        const double xv = x[v];
        u[3 * v] = x[ip + m_ * (j + n_ * k)] - xv;
        u[3 * v + 1] = x[i + m_ * (jp + n_ * k)] - xv;
        u[3 * v + 2] = x[i + m_ * (j + n_ * kp)] - xv;
      }
    }
  }
  return u;
}

DenseVector DiffOperator::apply_adjoint(const DenseVector& u) const {
  if (u.size() != out_size()) throw std::invalid_argument("apply_D_t: dimension mismatch");
  // Gather form: each output voxel reads its own difference block and the
  // blocks of its backward neighbours, so the accumulation order is fixed.
  DenseVector x(vol_size());
  std::size_t v = 0;
  for (std::size_t k = 0; k < l_; ++k) {
    const std::size_t km = (k == 0) ? l_ - 1 : k - 1;
    for (std::size_t j = 0; j < n_; ++j) {
      const std::size_t jm = (j == 0) ? n_ - 1 : j - 1;
      for (std::size_t i = 0; i < m_; ++i, ++v) {
        const std::size_t im = (i == 0) ? m_ - 1 : i - 1;
        double s = -(u[3 * v] + u[3 * v + 1] + u[3 * v + 2]);
        s += u[3 * (im + m_ * (j + n_ * k))];
        s += u[3 * (i + m_ * (jm + n_ * k)) + 1];
        s += u[3 * (i + m_ * (j + n_ * km)) + 2];
        x[v] = s;
      }
    }
  }
  return x;
}

DenseVector apply_D(const DiffOperator& d, const DenseVector& x) { return d.apply(x); }
DenseVector apply_D_t(const DiffOperator& d, const DenseVector& u) { return d.apply_adjoint(u); }

}  // namespace tvtomo
