#pragma once

#include <cstddef>
#include <cstdint>

#include "tvtomo/sparse_matrix.hpp"
#include "tvtomo/vec.hpp"

namespace tvtomo {

// Matrix-free linear map with an adjoint.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual std::size_t rows() const = 0;
  virtual std::size_t cols() const = 0;
  virtual DenseVector apply(const DenseVector& x) const = 0;
  virtual DenseVector apply_adjoint(const DenseVector& y) const = 0;
};

// Non-owning view of a SparseMatrix as a LinearOperator.
class SparseMatrixOperator final : public LinearOperator {
 public:
  explicit SparseMatrixOperator(const SparseMatrix& a) : a_(&a) {}
  std::size_t rows() const override { return a_->rows(); }
  std::size_t cols() const override { return a_->cols(); }
  DenseVector apply(const DenseVector& x) const override { return a_->apply(x); }
  DenseVector apply_adjoint(const DenseVector& y) const override { return a_->apply_adjoint(y); }

 private:
  const SparseMatrix* a_;
};

// Estimates the largest eigenvalue of A^T A (= ||A||^2) by power iteration.
// The returned value is a Rayleigh quotient, hence a lower bound on the true
// value, and is nondecreasing in the iteration count. Deterministic per seed.
double power_iter_norm_sq(const LinearOperator& a, std::size_t iters, std::uint64_t seed);

}  // namespace tvtomo
