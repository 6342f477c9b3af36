#pragma once

#include <cstdint>
#include <random>

namespace tvtomo {

// Deterministic random source. std::mt19937_64 has a sequence pinned by the
// standard; the floating-point draws are hand-rolled here because the
// standard-library distributions are implementation-defined and would break
// cross-platform reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on [-1, 1).
  double uniform_pm1() { return 2.0 * uniform() - 1.0; }

  // Standard normal via Box-Muller; caches the second deviate.
  double gaussian();

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace tvtomo
