// Deterministic, splittable random streams.
#pragma once

#include <cstdint>
#include <random>

namespace hk {

/// SplitMix64 finalizer; used to derive independent engine seeds.
std::uint64_t mix64(std::uint64_t x);

/// Combines a seed with an ordered list of indices into one 64-bit value.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> parts);

/// A random stream owned by exactly one simulation run. Identical
/// (seed, stream_id) pairs reproduce bit-identical sequences.
class SeededStream {
 public:
  SeededStream(std::uint64_t seed, std::uint64_t stream_id);

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }  ///< in [0, 1)

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace hk
