#include "nsdist/rng.hpp"

#include <cmath>
#include <numbers>

namespace nsdist {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  return splitmix64(h ^ c);
}

}  // namespace

double SeededStream::uniform(std::uint64_t iteration, std::uint64_t sample,
                             std::uint64_t slot) const {
  const std::uint64_t bits = mix_key(seed_, iteration, sample, slot) >> 11;
  // 53-bit mantissa, shifted off zero
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double SeededStream::normal(std::uint64_t iteration, std::uint64_t sample,
                            std::uint64_t coordinate) const {
  // Box-Muller: coordinates 2p and 2p+1 share one uniform pair.
  const std::uint64_t pair = coordinate / 2;
  const double u1 = uniform(iteration, sample, 2 * pair);
  const double u2 = uniform(iteration, sample, 2 * pair + 1);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return (coordinate % 2 == 0) ? r * std::cos(angle) : r * std::sin(angle);
}

Vector SeededStream::gaussian_vector(std::uint64_t iteration, std::uint64_t sample,
                                     Index dim) const {
  Vector x(dim);
  for (Index j = 0; j < dim; ++j) {
    x(j) = normal(iteration, sample, static_cast<std::uint64_t>(j));
  }
  return x;
}

}  // namespace nsdist
