#pragma once

#include <cstddef>
#include <vector>

namespace tvtomo {

using DenseVector = std::vector<double>;

double dot(const DenseVector& a, const DenseVector& b);
double norm2_sq(const DenseVector& a);
double norm2(const DenseVector& a);

// y += alpha * x
void axpy(double alpha, const DenseVector& x, DenseVector& y);
void scale(DenseVector& x, double alpha);
DenseVector sub(const DenseVector& a, const DenseVector& b);
// a + alpha * b
DenseVector add_scaled(const DenseVector& a, double alpha, const DenseVector& b);
double max_abs_diff(const DenseVector& a, const DenseVector& b);
bool all_finite(const DenseVector& a);

}  // namespace tvtomo
