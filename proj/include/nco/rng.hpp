#pragma once

#include <complex>
#include <cstdint>

namespace nco {

// Counter-based generator: draw k is a pure function of (seed, k). Streams can
// be forked by tag and replayed exactly, independent of platform RNG choices.
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t next_u64() noexcept;
  double next_unit() noexcept;      // uniform in [0, 1)
  double next_gaussian() noexcept;  // standard normal
  std::complex<double> next_cgaussian() noexcept;  // E|z|^2 = 1

  // Independent substream; tag different call sites, not draw indices.
  CounterRng fork(std::uint64_t tag) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }

private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace nco
