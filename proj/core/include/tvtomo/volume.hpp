#pragma once

#include <cstddef>

#include "tvtomo/vec.hpp"

namespace tvtomo {

// Voxel grid of size m x n x l flattened with the first index fastest:
// linear index of voxel (i, j, k) is i + m*(j + n*k).
struct Volume {
  std::size_t m = 0, n = 0, l = 0;
  DenseVector data;

  Volume() = default;
  Volume(std::size_t m_, std::size_t n_, std::size_t l_, double fill = 0.0)
      : m(m_), n(n_), l(l_), data(m_ * n_ * l_, fill) {}

  std::size_t size() const { return m * n * l; }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return i + m * (j + n * k);
  }
  double& at(std::size_t i, std::size_t j, std::size_t k) { return data[index(i, j, k)]; }
  double at(std::size_t i, std::size_t j, std::size_t k) const { return data[index(i, j, k)]; }

  // Throws unless data.size() == m*n*l and all dims are positive.
  void validate() const;
};

}  // namespace tvtomo
