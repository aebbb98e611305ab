#pragma once

#include <cstdint>
#include <random>

namespace disperse {

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Sub-seed for stream `index` under `root`: mix64(root + (index + 1) * golden).
// Attempts and trials draw from their own sub-seed so they can run in any
// order and still reproduce.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) noexcept;

// mt19937_64 with a portable [0,1) mapping (top 53 bits); the standard
// distributions are implementation-defined and would break reproducibility.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  std::uint64_t next() { return engine_(); }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

private:
  std::mt19937_64 engine_;
};

}  // namespace disperse
