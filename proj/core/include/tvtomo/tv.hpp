#pragma once

#include <array>

#include "tvtomo/diff_operator.hpp"
#include "tvtomo/vec.hpp"
#include "tvtomo/volume.hpp"

namespace tvtomo {

struct TvEval {
  double value = 0.0;
  DenseVector gradient;
};

// Huber approximation of ||z||: ||z|| - tau/2 outside the tau-ball,
// ||z||^2/(2 tau) inside. C^1, with 1/tau-Lipschitz gradient.
double huber(const std::array<double, 3>& z, double tau);

// Huber total variation T_tau(x) = sum over voxels of huber(D_j x, tau) and
// its gradient D^T u with u_j = D_j x / max(tau, ||D_j x||).
TvEval tv_value_grad(const DiffOperator& d, const DenseVector& x, double tau);
TvEval tv_value_grad(const DiffOperator& d, const Volume& x, double tau);

// Value only; skips the adjoint pass.
double tv_value(const DiffOperator& d, const DenseVector& x, double tau);

}  // namespace tvtomo
