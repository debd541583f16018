#include "nco/rng.hpp"

#include <cmath>
#include <numbers>

namespace nco {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::next_u64() noexcept {
  return mix64(seed_ ^ mix64(kGolden * ++counter_));
}

double CounterRng::next_unit() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_gaussian() noexcept {
  // Box-Muller; u1 shifted away from 0 so the log is finite.
  double u1 = next_unit();
  double u2 = next_unit();
  u1 = u1 + 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::complex<double> CounterRng::next_cgaussian() noexcept {
  const double re = next_gaussian();
  const double im = next_gaussian();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

CounterRng CounterRng::fork(std::uint64_t tag) const noexcept {
  return CounterRng(mix64(seed_ ^ mix64(tag ^ kGolden)));
}

}  // namespace nco
