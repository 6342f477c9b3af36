#include "tvtomo/vec.hpp"

#include <cmath>
#include <stdexcept>

namespace tvtomo {

namespace {
void check_same_size(const DenseVector& a, const DenseVector& b, const char* what) {
  if (a.size() != b.size()) throw std::invalid_argument(std::string(what) + ": size mismatch");
}
}  // namespace

double dot(const DenseVector& a, const DenseVector& b) {
  check_same_size(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2_sq(const DenseVector& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return s;
}

double norm2(const DenseVector& a) { return std::sqrt(norm2_sq(a)); }

void axpy(double alpha, const DenseVector& x, DenseVector& y) {
  check_same_size(x, y, "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(DenseVector& x, double alpha) {
  for (double& v : x) v *= alpha;
}

DenseVector sub(const DenseVector& a, const DenseVector& b) {
  check_same_size(a, b, "sub");
  DenseVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

DenseVector add_scaled(const DenseVector& a, double alpha, const DenseVector& b) {
  check_same_size(a, b, "add_scaled");
  DenseVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + alpha * b[i];
  return r;
}

double max_abs_diff(const DenseVector& a, const DenseVector& b) {
  check_same_size(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

bool all_finite(const DenseVector& a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace tvtomo
