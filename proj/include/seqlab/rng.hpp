#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace seqlab {

// splitmix64: tiny, portable, and reproducible across platforms, which the
// determinism contract requires. All randomness in the library flows from
// one root seed fanned out through derive_seed(root, label).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double next_unit() { return (next_u64() >> 11) * 0x1.0p-53; }

  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_unit();
  }

  // uniform in [0, bound); bound > 0
  std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

  // Seeded Fisher-Yates over a preexisting index vector.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = next_below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
};

// FNV-1a over the label, mixed into the root seed. Named sub-seeds keep
// shuffle/init/split streams independent of each other.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  Rng mix(root ^ h);
  return mix.next_u64();
}

}  // namespace seqlab
