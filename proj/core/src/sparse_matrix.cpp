#include "tvtomo/sparse_matrix.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "tvtomo/parallel.hpp"

namespace tvtomo {

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets) {
  if (cols > std::numeric_limits<std::uint32_t>::max())
    throw std::invalid_argument("SparseMatrix: column count exceeds 32-bit index range");
  for (const Triplet& t : triplets) {
    if (t.row >= rows || t.col >= cols) throw std::invalid_argument("SparseMatrix: triplet index out of range");
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.offsets_.assign(rows + 1, 0);
  m.col_indices_.reserve(triplets.size());
  m.values_.reserve(triplets.size());

  std::size_t i = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    while (i < triplets.size() && triplets[i].row == r) {
      double v = triplets[i].value;
      const std::size_t c = triplets[i].col;
      ++i;
      while (i < triplets.size() && triplets[i].row == r && triplets[i].col == c) {
        v += triplets[i].value;  // duplicates sum
        ++i;
      }
      if (v != 0.0) {
        m.col_indices_.push_back(static_cast<std::uint32_t>(c));
        m.values_.push_back(v);
      }
    }
    m.offsets_[r + 1] = m.values_.size();
  }
  return m;
}

SparseMatrix SparseMatrix::from_csr(std::size_t rows, std::size_t cols, std::vector<std::size_t> offsets,
                                    std::vector<std::uint32_t> col_indices, std::vector<double> values) {
  if (offsets.size() != rows + 1 || offsets.front() != 0 || offsets.back() != values.size() ||
      col_indices.size() != values.size())
    throw std::invalid_argument("SparseMatrix: malformed CSR arrays");
  for (std::size_t r = 0; r < rows; ++r) {
    if (offsets[r] > offsets[r + 1]) throw std::invalid_argument("SparseMatrix: offsets not nondecreasing");
    for (std::size_t k = offsets[r]; k < offsets[r + 1]; ++k) {
      if (col_indices[k] >= cols) throw std::invalid_argument("SparseMatrix: column index out of range");
      if (k > offsets[r] && col_indices[k] <= col_indices[k - 1])
        throw std::invalid_argument("SparseMatrix: column indices not strictly increasing in row");
    }
  }
  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.offsets_ = std::move(offsets);
  m.col_indices_ = std::move(col_indices);
  m.values_ = std::move(values);
  return m;
}

DenseVector SparseMatrix::apply(const DenseVector& x) const {
  if (x.size() != cols_) throw std::invalid_argument("spmv: dimension mismatch");
  DenseVector y(rows_, 0.0);
  parallel_for(rows_, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      double s = 0.0;
      for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) s += values_[k] * x[col_indices_[k]];
      y[r] = s;
    }
  });
  return y;
}

DenseVector SparseMatrix::apply_adjoint(const DenseVector& y) const {
  if (y.size() != rows_) throw std::invalid_argument("spmv_t: dimension mismatch");
  // Serial scatter: keeps the accumulation order fixed regardless of the
  // worker count, so results are bit-reproducible.
  DenseVector x(cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    const double yr = y[r];
    if (yr == 0.0) continue;
    for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) x[col_indices_[k]] += values_[k] * yr;
  }
  return x;
}

SparseMatrix SparseMatrix::purge_zero_rows(std::vector<std::size_t>* kept_rows) const {
  SparseMatrix m;
  m.cols_ = cols_;
  m.col_indices_ = col_indices_;
  m.values_ = values_;
  m.offsets_.assign(1, 0);
  if (kept_rows != nullptr) kept_rows->clear();
  for (std::size_t r = 0; r < rows_; ++r) {
    if (offsets_[r] == offsets_[r + 1]) continue;
    m.offsets_.push_back(offsets_[r + 1]);
    if (kept_rows != nullptr) kept_rows->push_back(r);
  }
  // offsets_ entries are already cumulative and rows keep their payload
  // order, so only the gaps between equal offsets were dropped.
  m.rows_ = m.offsets_.size() - 1;
  return m;
}

DenseVector spmv(const SparseMatrix& a, const DenseVector& x) { return a.apply(x); }
DenseVector spmv_t(const SparseMatrix& a, const DenseVector& y) { return a.apply_adjoint(y); }

}  // namespace tvtomo
