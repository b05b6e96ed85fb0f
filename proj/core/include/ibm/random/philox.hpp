#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <utility>

namespace ibm {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

/// SplitMix64 finalizer; used to derive child streams.
std::uint64_t splitmix64(std::uint64_t x);

/// Counter-based generator. A stream is identified by (seed, stream);
/// the counter is (block index, stream), so any draw can be recomputed
/// without replaying the ones before it.
class Rng {
 public:
  using result_type = std::uint32_t;

  Rng() = default;
  Rng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  /// Standard normal via Box-Muller; the second value of each pair is cached.
  double normal();

  /// Independent child stream; deterministic in (seed, stream, child).
  Rng split(std::uint64_t child) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t block() const { return block_; }

  /// The pair of standard normals drawn from block `index` of the stream.
  static std::pair<double, double> gaussian_pair_at(std::uint64_t seed, std::uint64_t stream,
                                                    std::uint64_t index);

 private:
  void refill();

  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  std::uint64_t block_ = 0;
  PhiloxCounter buf_{};
  int pos_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Seed of replica `index` under master seed `master`.
std::uint64_t replica_seed(std::uint64_t master, std::uint64_t index);

/// Mixes two words into a stream id.
std::uint64_t mix_stream(std::uint64_t a, std::uint64_t b);

}  // namespace ibm
