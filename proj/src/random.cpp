#include "regretlab/random.hpp"

#include <cmath>
#include <stdexcept>

namespace regretlab {

namespace {
constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomSource::RandomSource(std::uint64_t seed, StreamId id) : seed_(seed), id_(id) {
  std::uint64_t k = mix64(seed + kGoldenGamma);
  k = mix64(k ^ (static_cast<std::uint64_t>(id.purpose) << 32 | id.algorithm));
  k = mix64(k + kGoldenGamma * (id.seed_index + 1));
  key_ = k;
}

std::uint64_t RandomSource::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGoldenGamma);
}

double RandomSource::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::size_t RandomSource::uniform_index(std::size_t n) {
  if (n == 0) {
    throw std::invalid_argument("uniform_index: empty range");
  }
  // Reject the lowest (2^64 mod n) values so the modulo is unbiased.
  const auto bound = static_cast<std::uint64_t>(n);
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t x = next_u64();
    if (x >= threshold) {
      return static_cast<std::size_t>(x % bound);
    }
  }
}

double RandomSource::exponential() {
  return -std::log1p(-uniform01());
}

}  // namespace regretlab
