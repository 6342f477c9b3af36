#pragma once

#include <cstddef>

#include "tvtomo/linear_operator.hpp"
#include "tvtomo/vec.hpp"

namespace tvtomo {

// Runs `iters` iterations of CGLS (conjugate gradients on the normal
// equations A^T A x = A^T b) from x = 0 and returns the final iterate.
// Matrix-free and deterministic. Returns early if the normal-equations
// residual vanishes; b = 0 yields the zero vector.
DenseVector cgls_warm_start(const LinearOperator& a, const DenseVector& b, std::size_t iters);

}  // namespace tvtomo
