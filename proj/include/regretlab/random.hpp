#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>

namespace regretlab {

/// What a random stream is used for. Part of the stream identity, so two
/// purposes never share draws even under the same seed.
enum class StreamPurpose : std::uint32_t {
  MdpGeneration = 1,
  InitialState = 2,
  Transition = 3,
  Test = 15,
};

/// Identity of an independent stream: (purpose, algorithm tag, seed index).
struct StreamId {
  StreamPurpose purpose = StreamPurpose::Test;
  std::uint32_t algorithm = 0;
  std::uint64_t seed_index = 0;

  friend bool operator==(const StreamId&, const StreamId&) = default;
};

/**
 * Counter-based random source.
 *
 * The stream key is derived from (seed, stream id) by SplitMix64 chaining; the
 * n-th output is mix(key + n * golden_gamma). Identical (seed, id) pairs give
 * identical sequences on every platform, and all distribution sampling below
 * is done in-house so no standard-library distribution leaks into results.
 *
 * Satisfies std::uniform_random_bit_generator.
 */
class RandomSource {
 public:
  using result_type = std::uint64_t;

  RandomSource(std::uint64_t seed, StreamId id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  /// Uniform integer in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n);

  /// Standard exponential draw, mean 1.
  double exponential();

  std::uint64_t seed() const { return seed_; }
  const StreamId& id() const { return id_; }
  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t seed_;
  StreamId id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace regretlab
