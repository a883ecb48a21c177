#pragma once
// Counter-based RNG used everywhere in the library.
//
// All Monte Carlo code derives child seeds from a root seed plus integer
// coordinates (trial index, node index, ...) via chained splitmix64 steps.
// A run then consumes one SplitMix64 stream sequentially. Because child
// seeds are pure functions of (root, coordinates), parallel execution over
// trials/streams/nodes produces output identical to sequential execution.

#include <cstdint>

namespace ablearn {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// splitmix64 finalizer (public domain mixer).
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next() {
    state += kGolden;
    return mix64(state);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return (next() >> 11) * 0x1.0p-53; }
};

// Child-seed derivation: fold each coordinate into the state with one
// splitmix64 step. derive(root, a) != derive(root, a, 0) by construction
// (every coordinate, present or absent, changes the chain length).
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a) {
  return mix64(root + kGolden + a);
}
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b) {
  return mix64(derive_seed(root, a) + kGolden + b);
}
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b,
                                 std::uint64_t c) {
  return mix64(derive_seed(root, a, b) + kGolden + c);
}

}  // namespace ablearn
