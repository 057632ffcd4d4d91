#pragma once

#include <cstdint>

#include "nsdist/numerics.hpp"

namespace nsdist {

/// Counter-based standard normal generator.
///
/// Every draw is a pure function of (seed, iteration, sample, coordinate),
/// so any node holding the seed regenerates the same perturbation X_{t,k}
/// without communicating it. There is no mutable position: copies of a
/// stream are interchangeable and safe to share across threads.
class SeededStream {
 public:
  explicit SeededStream(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  double normal(std::uint64_t iteration, std::uint64_t sample, std::uint64_t coordinate) const;

  /// Uniform on the open interval (0, 1).
  double uniform(std::uint64_t iteration, std::uint64_t sample, std::uint64_t slot) const;

  Vector gaussian_vector(std::uint64_t iteration, std::uint64_t sample, Index dim) const;

 private:
  std::uint64_t seed_;
};

}  // namespace nsdist
