#pragma once

#include <cstdint>
#include <random>

// Deterministic random streams.
//
// One master seed drives an entire run. Every independent task derives its
// own child stream with derive(); derivation mixes (seed, task id) through a
// fixed 64-bit finalizer, so child streams are reproducible from the stored
// seed alone, independent of how much of the parent stream was consumed and
// of how work is distributed over workers.
//
// Gaussian variates are produced by Box-Muller on top of the 64-bit engine
// rather than std::normal_distribution, whose output sequence is not pinned
// by the standard.

namespace unitalcap {

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  // Child stream for independent task `task`; does not advance this stream.
  RandomStream derive(std::uint64_t task) const;

  // Seed this stream was constructed with; enough to reconstruct it.
  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();
  double uniform();   // [0, 1), 53-bit resolution
  double gaussian();  // standard normal

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// SplitMix64 finalizer; stable across platforms.
std::uint64_t mix64(std::uint64_t x);

}  // namespace unitalcap
