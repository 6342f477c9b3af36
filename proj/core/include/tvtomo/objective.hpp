#pragma once

#include <cstddef>
#include <optional>

#include "tvtomo/diff_operator.hpp"
#include "tvtomo/sparse_matrix.hpp"
#include "tvtomo/tv.hpp"
#include "tvtomo/vec.hpp"

namespace tvtomo {

// Smooth convex objective over the box Q = [0,1]^dim.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual std::size_t dim() const = 0;
  virtual double value(const DenseVector& x) const = 0;
  // Returns the value and fills grad (resized as needed).
  virtual double value_grad(const DenseVector& x, DenseVector& grad) const = 0;
};

// Euclidean projection onto [0,1]^n (componentwise clamp).
DenseVector project_box(DenseVector x);
void project_box_inplace(DenseVector& x);

// Gradient map G_nu(x) = nu * (x - P(x - grad/nu)) for nu > 0.
DenseVector gradient_map(const DenseVector& x, const DenseVector& grad, double nu);
DenseVector gradient_map(const Objective& f, const DenseVector& x, double nu);

// Local strong-convexity estimate
//   M(x, y) = (f(x) - f(y) - <grad f(y), x - y>) / (||x - y||^2 / 2),
// or +inf when x == y. Raw value: may be negative in finite precision.
double local_mu(double f_x, double f_y, const DenseVector& grad_y, const DenseVector& x,
                const DenseVector& y);

struct TheoryParams {
  double mu = 0.0;
  double L = 0.0;
  std::optional<double> q;  // L/mu bound; empty when mu = 0
};

// Conservative (mu, L) box for phi given ||A||^2, sigma_min(A)^2, alpha, tau:
// mu = sigma_min^2, L = ||A||^2 + alpha*12/tau. Diagnostic only; the solvers
// never consume these.
TheoryParams theory_params(double norm_a_sq, double sigma_min_sq, double alpha, double tau);

// Box-constrained TV-regularized least squares:
//   phi(x) = 0.5*||A x - b||^2 + alpha * T_tau(x)  over  Q = [0,1]^N.
struct TvRegProblem {
  SparseMatrix a;
  DenseVector b;
  double alpha = 0.0;
  double tau = 0.0;
  DiffOperator diff;

  TvRegProblem(SparseMatrix a_, DenseVector b_, double alpha_, double tau_, std::size_t m,
               std::size_t n, std::size_t l);
};

struct ObjEval {
  double value = 0.0;
  DenseVector gradient;
  // ||A x - b||^2, kept so callers can log the data fit without extra matvecs.
  double residual_norm_sq = 0.0;
};

// One spmv, one spmv_t and one TV sweep per call.
ObjEval phi_value_grad(const TvRegProblem& p, const DenseVector& x);
// One spmv and the TV value sweep; no adjoint work.
double phi_value(const TvRegProblem& p, const DenseVector& x);

class TvRegObjective final : public Objective {
 public:
  explicit TvRegObjective(const TvRegProblem& p) : p_(&p) {}
  std::size_t dim() const override { return p_->diff.vol_size(); }
  double value(const DenseVector& x) const override { return phi_value(*p_, x); }
  double value_grad(const DenseVector& x, DenseVector& grad) const override {
    ObjEval ev = phi_value_grad(*p_, x);
    grad = std::move(ev.gradient);
    return ev.value;
  }

 private:
  const TvRegProblem* p_;
};

}  // namespace tvtomo
