#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tvtomo/vec.hpp"

namespace tvtomo {

struct Triplet {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

// CSR matrix. Column indices are strictly increasing within each row and no
// explicit zeros are stored; from_triplets enforces both (duplicates are
// summed, exact zeros dropped).
class SparseMatrix {
 public:
  SparseMatrix() = default;

  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);
  // Takes prebuilt CSR arrays; validates ordering and bounds.
  static SparseMatrix from_csr(std::size_t rows, std::size_t cols, std::vector<std::size_t> offsets,
                               std::vector<std::uint32_t> col_indices, std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  const std::vector<std::size_t>& row_offsets() const { return offsets_; }
  const std::vector<std::uint32_t>& col_indices() const { return col_indices_; }
  const std::vector<double>& values() const { return values_; }

  DenseVector apply(const DenseVector& x) const;          // A x
  DenseVector apply_adjoint(const DenseVector& y) const;  // A^T y

  // Removes all-zero rows; if kept_rows is non-null it receives the original
  // indices of the surviving rows, in order.
  SparseMatrix purge_zero_rows(std::vector<std::size_t>* kept_rows = nullptr) const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> col_indices_;
  std::vector<double> values_;
};

DenseVector spmv(const SparseMatrix& a, const DenseVector& x);
DenseVector spmv_t(const SparseMatrix& a, const DenseVector& y);

}  // namespace tvtomo
