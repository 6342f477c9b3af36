#include "tvtomo/volume.hpp"

#include <stdexcept>

namespace tvtomo {

void Volume::validate() const {
  if (m == 0 || n == 0 || l == 0) throw std::invalid_argument("Volume: dimensions must be positive");
  if (data.size() != m * n * l) throw std::invalid_argument("Volume: data length does not match dimensions");
}

}  // namespace tvtomo
