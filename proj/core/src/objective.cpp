#include "tvtomo/objective.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tvtomo {

DenseVector project_box(DenseVector x) {
  project_box_inplace(x);
  return x;
}

void project_box_inplace(DenseVector& x) {
  for (double& v : x) {
    if (v < 0.0) v = 0.0;
    else if (v > 1.0) v = 1.0;
  }
}

DenseVector gradient_map(const DenseVector& x, const DenseVector& grad, double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("gradient_map: nu must be positive");
  if (x.size() != grad.size()) throw std::invalid_argument("gradient_map: dimension mismatch");
  DenseVector g(x.size());
  const double inv = 1.0 / nu;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double p = x[i] - inv * grad[i];
    if (p < 0.0) p = 0.0;
    else if (p > 1.0) p = 1.0;
    g[i] = nu * (x[i] - p);
  }
  return g;
}

DenseVector gradient_map(const Objective& f, const DenseVector& x, double nu) {
  DenseVector grad;
  f.value_grad(x, grad);
  return gradient_map(x, grad, nu);
}

double local_mu(double f_x, double f_y, const DenseVector& grad_y, const DenseVector& x,
                const DenseVector& y) {
  if (x.size() != y.size() || grad_y.size() != y.size())
    throw std::invalid_argument("local_mu: dimension mismatch");
  double dist_sq = 0.0;
  double lin = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    dist_sq += d * d;
    lin += grad_y[i] * d;
  }
  if (dist_sq == 0.0) return std::numeric_limits<double>::infinity();
  return (f_x - f_y - lin) / (0.5 * dist_sq);
}

TheoryParams theory_params(double norm_a_sq, double sigma_min_sq, double alpha, double tau) {
  if (norm_a_sq < 0.0 || sigma_min_sq < 0.0 || alpha < 0.0 || !(tau > 0.0))
    throw std::invalid_argument("theory_params: invalid arguments");
  TheoryParams tp;
  tp.mu = sigma_min_sq;
  tp.L = norm_a_sq + alpha * 12.0 / tau;
  if (tp.mu > 0.0) tp.q = tp.L / tp.mu;
  return tp;
}

TvRegProblem::TvRegProblem(SparseMatrix a_, DenseVector b_, double alpha_, double tau_,
                           std::size_t m, std::size_t n, std::size_t l)
    : a(std::move(a_)), b(std::move(b_)), alpha(alpha_), tau(tau_), diff(m, n, l) {
  if (a.cols() != diff.vol_size()) throw std::invalid_argument("TvRegProblem: A columns != voxel count");
  if (b.size() != a.rows()) throw std::invalid_argument("TvRegProblem: b length != A rows");
  if (alpha < 0.0) throw std::invalid_argument("TvRegProblem: alpha must be nonnegative");
  if (!(tau > 0.0)) throw std::invalid_argument("TvRegProblem: tau must be positive");
}

ObjEval phi_value_grad(const TvRegProblem& p, const DenseVector& x) {
  DenseVector r = p.a.apply(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= p.b[i];
  const double rr = norm2_sq(r);
  ObjEval ev;
  ev.residual_norm_sq = rr;
  ev.gradient = p.a.apply_adjoint(r);
  const TvEval tv = tv_value_grad(p.diff, x, p.tau);
  ev.value = 0.5 * rr + p.alpha * tv.value;
  axpy(p.alpha, tv.gradient, ev.gradient);
  return ev;
}

double phi_value(const TvRegProblem& p, const DenseVector& x) {
  DenseVector r = p.a.apply(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= p.b[i];
  return 0.5 * norm2_sq(r) + p.alpha * tv_value(p.diff, x, p.tau);
}

}  // namespace tvtomo
