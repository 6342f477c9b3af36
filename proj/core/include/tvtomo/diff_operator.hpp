#pragma once

#include <cstddef>

#include "tvtomo/linear_operator.hpp"
#include "tvtomo/vec.hpp"
#include "tvtomo/volume.hpp"

namespace tvtomo {

// Forward-difference gradient on an m x n x l voxel grid with periodic wrap
// on every axis and unit grid spacing. The output stacks the three
// differences of each voxel contiguously: entries (3v, 3v+1, 3v+2) hold the
// x-, y- and z-differences at the voxel with linear index v, so D maps
// R^N -> R^{3N}. ||D||^2 <= 12.
class DiffOperator {
 public:
  DiffOperator(std::size_t m, std::size_t n, std::size_t l);

  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }
  std::size_t l() const { return l_; }
  std::size_t vol_size() const { return m_ * n_ * l_; }
  std::size_t out_size() const { return 3 * vol_size(); }

  DenseVector apply(const DenseVector& x) const;            // D x
  DenseVector apply_adjoint(const DenseVector& u) const;    // D^T u

 private:
  std::size_t m_, n_, l_;
};

DenseVector apply_D(const DiffOperator& d, const DenseVector& x);
DenseVector apply_D_t(const DiffOperator& d, const DenseVector& u);

// LinearOperator view, e.g. for power iteration.
class DiffOperatorView final : public LinearOperator {
 public:
  explicit DiffOperatorView(const DiffOperator& d) : d_(&d) {}
  std::size_t rows() const override { return d_->out_size(); }
  std::size_t cols() const override { return d_->vol_size(); }
  DenseVector apply(const DenseVector& x) const override { return d_->apply(x); }
  DenseVector apply_adjoint(const DenseVector& u) const override { return d_->apply_adjoint(u); }

 private:
  const DiffOperator* d_;
};

}  // namespace tvtomo
