#include "tvtomo/tv.hpp"

#include <cmath>
#include <stdexcept>

namespace tvtomo {

namespace {

void check_tau(double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("tv: tau must be positive");
}

double huber_of_norm(double nz, double tau) {
  return nz >= tau ? nz - 0.5 * tau : nz * nz / (2.0 * tau);
}

}  // namespace

double huber(const std::array<double, 3>& z, double tau) {
  check_tau(tau);
  const double nz = std::sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]);
  return huber_of_norm(nz, tau);
}

TvEval tv_value_grad(const DiffOperator& d, const DenseVector& x, double tau) {
  check_tau(tau);
  DenseVector u = d.apply(x);
  double value = 0.0;
  for (std::size_t j = 0; j < u.size(); j += 3) {
    const double nz = std::sqrt(u[j] * u[j] + u[j + 1] * u[j + 1] + u[j + 2] * u[j + 2]);
    value += huber_of_norm(nz, tau);
    const double w = 1.0 / std::max(tau, nz);
    u[j] *= w;
    u[j + 1] *= w;
    u[j + 2] *= w;
  }
  TvEval ev;
  ev.value = value;
  ev.gradient = d.apply_adjoint(u);
  return ev;
}

TvEval tv_value_grad(const DiffOperator& d, const Volume& x, double tau) {
  x.validate();
  if (x.m != d.m() || x.n != d.n() || x.l != d.l())
    throw std::invalid_argument("tv_value_grad: volume does not match operator grid");
  return tv_value_grad(d, x.data, tau);
}

double tv_value(const DiffOperator& d, const DenseVector& x, double tau) {
  check_tau(tau);
  const DenseVector u = d.apply(x);
  double value = 0.0;
  for (std::size_t j = 0; j < u.size(); j += 3) {
    const double nz = std::sqrt(u[j] * u[j] + u[j + 1] * u[j + 1] + u[j + 2] * u[j + 2]);
    value += huber_of_norm(nz, tau);
  }
  return value;
}

}  // namespace tvtomo
