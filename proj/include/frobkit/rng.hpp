#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace frobkit {

// SplitMix64. State advances by the golden-gamma increment; output is the
// finalized mix. Identical streams on every platform for a given seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1): top 53 bits scaled by 2^-53.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

// FNV-1a, 64-bit.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

// Per-check stream: master seed mixed with hashed identifiers so results do
// not depend on scheduling order.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view family_id,
                                 std::string_view check_id, std::uint64_t index = 0) {
  std::uint64_t h = master;
  h ^= fnv1a(family_id) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  h ^= fnv1a(check_id) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  h ^= index + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  return h;
}

}  // namespace frobkit
