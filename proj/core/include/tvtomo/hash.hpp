#pragma once

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

namespace tvtomo {

// FNV-1a 64-bit, used for content hashes (reference cache keys, output
// manifests). Stable across platforms for little-endian payloads; numeric
// payloads are serialized explicitly below to keep that true everywhere.
class Fnv1a64 {
 public:
  Fnv1a64& bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= p[i];
      h_ *= 0x100000001b3ULL;
    }
    return *this;
  }
  Fnv1a64& u64(std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    return bytes(buf, 8);
  }
  Fnv1a64& f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    return u64(bits);
  }
  Fnv1a64& str(const std::string& s) { return bytes(s.data(), s.size()); }
  Fnv1a64& f64s(const std::vector<double>& v) {
    for (double x : v) f64(x);
    return *this;
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

std::string hash_hex(std::uint64_t h);

}  // namespace tvtomo
